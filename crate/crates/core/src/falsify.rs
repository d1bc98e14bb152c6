//! Seeded randomized campaigns: generate operators and families, run the
//! evaluators, and aggregate margins per theorem.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, InequalityReport, TheoremId};
use crate::error::{Error, Result};
use crate::linops::{spectral_radius, PositiveOperator};
use crate::nystrom::{FactorPair, KernelSpec};
use crate::perron::{is_irreducible, make_family, perron_pair, regularize, FamilyKind, OperatorFamily};

/// Regularization applied to reducible random inputs before Perron pairs are taken.
pub const CAMPAIGN_EPS: f64 = 1e-8;

/// Half-width `L` of the `exp(uniform(-L, L))` multiplier distribution.
pub const LOG_SPREAD: f64 = 2.0;

/// Relative margin below which a trial counts as a near-equality witness.
pub const NEAR_EQUALITY: f64 = 1e-6;

/// Eps ladder used for decreasing-limit trials.
pub const EPS_LADDER: [f64; 4] = [1.0, 0.1, 0.01, 0.001];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyChoice {
    #[default]
    Similarity,
    AdjointPair,
    Series,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub seed: u64,
    pub trials: usize,
    pub dim: usize,
    /// Probability that an entry is nonzero.
    pub density: f64,
    pub entry_scale: f64,
    pub family_kind: FamilyChoice,
    /// Members per family (adjoint pairs always have two).
    pub family_size: usize,
    pub theorem_set: Vec<TheoremId>,
    pub tol: f64,
    /// Append the exchange-matrix equality fixture with `d = (4, 1)`.
    pub inject_fixture: bool,
    /// Cap on listed near-equality witnesses per theorem (all are counted).
    pub max_witnesses: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            seed: 42,
            trials: 1000,
            dim: 6,
            density: 1.0,
            entry_scale: 1.0,
            family_kind: FamilyChoice::Similarity,
            family_size: 3,
            theorem_set: TheoremId::ALL.to_vec(),
            tol: bounds::DEFAULT_TOL,
            inject_fixture: false,
            max_witnesses: 16,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::domain("trials must be at least 1"));
        }
        if self.dim == 0 {
            return Err(Error::domain("dim must be at least 1"));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::domain(format!("density must lie in (0, 1], got {}", self.density)));
        }
        if !(self.entry_scale > 0.0 && self.entry_scale.is_finite()) {
            return Err(Error::domain("entry_scale must be positive"));
        }
        if self.family_size == 0 {
            return Err(Error::domain("family_size must be at least 1"));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(Error::domain("tol must be non-negative"));
        }
        if self.theorem_set.is_empty() {
            return Err(Error::domain("theorem_set must not be empty"));
        }
        Ok(())
    }

    fn family_len(&self) -> usize {
        match self.family_kind {
            FamilyChoice::AdjointPair => 2,
            _ => self.family_size,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` in a campaign seeded with `seed`.
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    splitmix64(splitmix64(seed) ^ index as u64)
}

fn trial_rng(seed: u64, theorem: TheoremId) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stream = TheoremId::ALL.iter().position(|t| *t == theorem).unwrap_or(0);
    rng.set_stream(stream as u64);
    rng
}

fn sample_entry<R: Rng>(rng: &mut R, density: f64, entry_scale: f64) -> f64 {
    let keep = density >= 1.0 || rng.gen::<f64>() < density;
    // 1 - U[0,1) lies in (0, 1]
    let x = entry_scale * (1.0 - rng.gen::<f64>());
    if keep {
        x
    } else {
        0.0
    }
}

pub fn sample_operator<R: Rng>(rng: &mut R, dim: usize, density: f64, entry_scale: f64) -> PositiveOperator {
    let entries = (0..dim * dim).map(|_| sample_entry(rng, density, entry_scale)).collect();
    PositiveOperator::new(dim, entries).expect("sampled entries are non-negative")
}

/// Entries are zero with probability `1 - density`, else uniform on `(0, entry_scale]`.
pub fn random_operator(seed: u64, dim: usize, density: f64, entry_scale: f64) -> PositiveOperator {
    sample_operator(&mut ChaCha8Rng::seed_from_u64(seed), dim, density, entry_scale)
}

/// Strictly positive multiplier with `log d ~ uniform(-L, L)`.
pub fn sample_multiplier<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-LOG_SPREAD..LOG_SPREAD).exp()).collect()
}

/// Separable kernel with `rank` polynomial factor pairs of the given degree and
/// coefficients uniform on `[0, 1)`, hence non-negative on the unit square.
pub fn random_kernel(seed: u64, rank: usize, degree: usize) -> KernelSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = |rng: &mut ChaCha8Rng| (0..=degree).map(|_| rng.gen::<f64>()).collect::<Vec<_>>();
    let pairs = (0..rank.max(1))
        .map(|_| FactorPair {
            u: coeffs(&mut rng),
            v: coeffs(&mut rng),
        })
        .collect();
    KernelSpec::Separable(pairs)
}

/// Inputs and context shared by the evaluators of one trial.
struct TrialInput {
    base: PositiveOperator,
    note: String,
}

fn perron_ready(op: PositiveOperator) -> Result<TrialInput> {
    if is_irreducible(&op) {
        Ok(TrialInput { base: op, note: String::new() })
    } else {
        Ok(TrialInput {
            base: regularize(&op, CAMPAIGN_EPS)?,
            note: format!(";regularized={CAMPAIGN_EPS}"),
        })
    }
}

fn sample_family<R: Rng>(rng: &mut R, base: &PositiveOperator, cfg: &CampaignConfig) -> Result<OperatorFamily> {
    let n = cfg.family_len();
    let kind = match cfg.family_kind {
        FamilyChoice::Similarity => FamilyKind::Similarity {
            scales: (1..n).map(|_| sample_multiplier(rng, base.dim())).collect(),
        },
        FamilyChoice::AdjointPair => FamilyKind::AdjointPair,
        FamilyChoice::Series => FamilyKind::Series {
            polys: (0..n)
                .map(|_| (0..3).map(|_| 1.0 - rng.gen::<f64>()).collect())
                .collect(),
        },
    };
    make_family(base, kind, None)
}

fn with_note(mut reports: Vec<InequalityReport>, note: &str) -> Vec<InequalityReport> {
    if !note.is_empty() {
        for r in &mut reports {
            r.context.push_str(note);
        }
    }
    reports
}

/// Evaluate one theorem on freshly generated inputs.
fn run_theorem(theorem: TheoremId, seed: u64, cfg: &CampaignConfig) -> Result<Vec<InequalityReport>> {
    use TheoremId::*;
    let rng = &mut trial_rng(seed, theorem);
    let n = cfg.dim;
    let raw = sample_operator(rng, n, cfg.density, cfg.entry_scale);
    let reports = match theorem {
        Lemma1 | Lemma2 => {
            let input = perron_ready(raw)?;
            let pair = perron_pair(&input.base, None)?;
            let u = sample_multiplier(rng, n);
            let d = sample_multiplier(rng, n);
            let e = sample_multiplier(rng, n);
            let rep = bounds::lemma_pair_bound(&input.base, &pair, &u, &d, &e)?;
            with_note(rep.all().into_iter().cloned().collect(), &input.note)
        }
        Sum | ConvexSum | SeriesSum | ResolventSum => {
            let input = perron_ready(raw)?;
            let fam = sample_family(rng, &input.base, cfg)?;
            let m = fam.len();
            let rep = match theorem {
                Sum => {
                    let ds: Vec<_> = (0..m).map(|_| sample_multiplier(rng, n)).collect();
                    let es: Vec<_> = (0..m).map(|_| sample_multiplier(rng, n)).collect();
                    bounds::sum_bound(&fam, &ds, &es)?
                }
                ConvexSum => {
                    let ts: Vec<f64> = (0..m).map(|_| 1.0 - rng.gen::<f64>()).collect();
                    bounds::convex_sum_bound(&fam, &ts)?
                }
                SeriesSum => {
                    let polys: Vec<Vec<f64>> = (0..m)
                        .map(|_| (0..3).map(|_| rng.gen::<f64>()).collect())
                        .collect();
                    bounds::series_sum_bound(&fam, &polys)?
                }
                _ => {
                    let ss: Vec<f64> = fam
                        .pairs
                        .iter()
                        .map(|p| p.r * (1.0 + rng.gen_range(0.1..2.0)))
                        .collect();
                    bounds::resolvent_sum_bound(&fam, &ss)?
                }
            };
            with_note(vec![rep], &input.note)
        }
        SharpeningWeak | SharpeningStrong => {
            let input = perron_ready(raw)?;
            let pair = perron_pair(&input.base, None)?;
            let d = sample_multiplier(rng, n);
            let s = pair.r * (1.0 + rng.gen_range(0.1..2.0));
            let rep = bounds::resolvent_sharpening(&input.base, &pair, &d, s)?;
            with_note(rep.all().into_iter().cloned().collect(), &input.note)
        }
        LevingerFloor | LevingerMonotone => {
            let d = sample_multiplier(rng, n);
            let curve = bounds::levinger_curve(&raw, &d, &bounds::uniform_samples(bounds::DEFAULT_SAMPLES))?;
            let c = format!("dim={n};op={}", bounds::digest(&raw));
            let mut out = vec![curve.floor_report(cfg.tol), curve.monotone_report(cfg.tol)];
            for r in &mut out {
                r.context = format!("{c};{}", r.context);
            }
            out
        }
        NrLinear | NrSquare => {
            let t = rng.gen::<f64>();
            bounds::numerical_radius_chain(&raw, t)?.reports
        }
        NrSymmetric => {
            let d = sample_multiplier(rng, n);
            vec![bounds::symmetric_similarity_bound(&raw, &d)?]
        }
        PairNorm | PairNormT => {
            let b = sample_operator(rng, n, cfg.density, cfg.entry_scale);
            let t = (theorem == PairNormT).then(|| rng.gen::<f64>());
            bounds::pair_norm_bound(&raw, &b, t)?.all().cloned().collect()
        }
        DecreasingLimit => vec![bounds::decreasing_limit_check(&raw, &EPS_LADDER)?.report],
        AdjointRadius => {
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0f64).exp()).collect();
            let op = raw.with_weights(w)?;
            vec![bounds::adjoint_radius_check(&op)?]
        }
    };
    Ok(reports
        .into_iter()
        .filter(|r| r.theorem_id == theorem)
        .map(|r| r.with_tol(cfg.tol))
        .collect())
}

fn run_fixture(theorem: TheoremId, cfg: &CampaignConfig) -> Option<Result<Vec<InequalityReport>>> {
    let k = PositiveOperator::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).expect("fixture");
    let d = [4.0, 1.0];
    let run = || -> Result<Vec<InequalityReport>> {
        match theorem {
            TheoremId::Sum => {
                let m = cfg.family_len();
                let kind = match cfg.family_kind {
                    FamilyChoice::AdjointPair => FamilyKind::AdjointPair,
                    _ => FamilyKind::Similarity {
                        scales: vec![vec![1.0, 1.0]; m - 1],
                    },
                };
                let fam = make_family(&k, kind, None)?;
                let ds = vec![d.to_vec(); fam.len()];
                let es = vec![vec![1.0, 1.0]; fam.len()];
                Ok(vec![bounds::sum_bound(&fam, &ds, &es)?])
            }
            TheoremId::SharpeningWeak => {
                let pair = perron_pair(&k, None)?;
                Ok(vec![bounds::resolvent_sharpening(&k, &pair, &d, 2.0)?.weaker])
            }
            _ => unreachable!(),
        }
    };
    matches!(theorem, TheoremId::Sum | TheoremId::SharpeningWeak).then(|| {
        run().map(|v| {
            v.into_iter()
                .map(|mut r| {
                    r.context.push_str(";fixture=exchange");
                    r.with_tol(cfg.tol)
                })
                .collect()
        })
    })
}

/// Worst report of one trial for one theorem: one row of the margin table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginRow {
    pub trial: usize,
    pub seed: u64,
    pub theorem_id: TheoremId,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    pub context: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRef {
    pub trial: usize,
    pub seed: u64,
    pub margin: f64,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub seed: u64,
    pub theorem_id: TheoremId,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremStats {
    pub theorem_id: TheoremId,
    pub count: usize,
    pub failures: usize,
    pub min_margin: f64,
    pub median_margin: f64,
    pub violations: Vec<TrialRef>,
    pub near_equality_count: usize,
    pub near_equality: Vec<TrialRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub theorems: Vec<TheoremStats>,
    pub failures: Vec<TrialFailure>,
    #[serde(skip)]
    pub rows: Vec<MarginRow>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl CampaignReport {
    pub fn violation_count(&self) -> usize {
        self.theorems.iter().map(|t| t.violations.len()).sum()
    }

    pub fn stats(&self, id: TheoremId) -> Option<&TheoremStats> {
        self.theorems.iter().find(|t| t.theorem_id == id)
    }
}

fn scale_of(r: &InequalityReport) -> f64 {
    r.scale()
}

fn worst(reports: Vec<InequalityReport>) -> Option<InequalityReport> {
    reports
        .into_iter()
        .min_by(|a, b| (a.margin / scale_of(a)).total_cmp(&(b.margin / scale_of(b))))
}

type Outcome = (usize, u64, TheoremId, Result<Vec<InequalityReport>>);

fn trial_outcomes(cfg: &CampaignConfig, trial: usize) -> Vec<Outcome> {
    let seed = trial_seed(cfg.seed, trial);
    cfg.theorem_set
        .iter()
        .map(|t| (trial, seed, *t, run_theorem(*t, seed, cfg)))
        .collect()
}

#[cfg(feature = "parallel")]
fn collect_outcomes(cfg: &CampaignConfig) -> Vec<Outcome> {
    use rayon::prelude::*;
    let mut out: Vec<Vec<Outcome>> = (0..cfg.trials).into_par_iter().map(|i| trial_outcomes(cfg, i)).collect();
    out.sort_by_key(|v| v.first().map(|o| o.0));
    out.into_iter().flatten().collect()
}

#[cfg(not(feature = "parallel"))]
fn collect_outcomes(cfg: &CampaignConfig) -> Vec<Outcome> {
    (0..cfg.trials).flat_map(|i| trial_outcomes(cfg, i)).collect()
}

fn median(sorted: &[f64]) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => sorted[n / 2],
        n => 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]),
    }
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut outcomes = collect_outcomes(cfg);
    if cfg.inject_fixture {
        for t in &cfg.theorem_set {
            if let Some(res) = run_fixture(*t, cfg) {
                outcomes.push((cfg.trials, 0, *t, res));
            }
        }
    }

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (trial, seed, theorem_id, res) in outcomes {
        match res.map(worst) {
            Ok(Some(r)) => rows.push(MarginRow {
                trial,
                seed,
                theorem_id,
                lhs: r.lhs,
                rhs: r.rhs,
                margin: r.margin,
                pass: r.pass,
                context: r.context,
            }),
            Ok(None) => failures.push(TrialFailure {
                trial,
                seed,
                theorem_id,
                message: "no report produced".into(),
            }),
            Err(e) => failures.push(TrialFailure {
                trial,
                seed,
                theorem_id,
                message: e.to_string(),
            }),
        }
    }

    let theorems = cfg
        .theorem_set
        .iter()
        .map(|id| {
            let mine: Vec<&MarginRow> = rows.iter().filter(|r| r.theorem_id == *id).collect();
            let mut margins: Vec<f64> = mine.iter().map(|r| r.margin).collect();
            margins.sort_by(f64::total_cmp);
            let to_ref = |r: &&MarginRow| TrialRef {
                trial: r.trial,
                seed: r.seed,
                margin: r.margin,
                digest: r.context.clone(),
            };
            let near: Vec<TrialRef> = mine
                .iter()
                .filter(|r| r.margin < NEAR_EQUALITY * 1f64.max(r.lhs.abs()).max(r.rhs.abs()))
                .map(to_ref)
                .collect();
            TheoremStats {
                theorem_id: *id,
                count: mine.len(),
                failures: failures.iter().filter(|f| f.theorem_id == *id).count(),
                min_margin: margins.first().copied().unwrap_or(f64::NAN),
                median_margin: median(&margins),
                violations: mine.iter().filter(|r| !r.pass).map(to_ref).collect(),
                near_equality_count: near.len(),
                near_equality: near.into_iter().take(cfg.max_witnesses).collect(),
            }
        })
        .collect();

    Ok(CampaignReport {
        config: cfg.clone(),
        theorems,
        failures,
        rows,
        runtime: start.elapsed(),
    })
}

/// Spectral radius of a discretized random kernel; a quick smoke check that
/// generated kernels are usable.
pub fn kernel_radius(spec: &KernelSpec, n: usize) -> Result<f64> {
    let grid = crate::nystrom::build_grid(n, crate::nystrom::Scheme::Midpoint)?;
    spectral_radius(&crate::nystrom::discretize_kernel(spec, &grid)?)
}
