//! Evaluators for the spectral-radius inequalities. Each returns both sides and
//! the margin `lhs - rhs` as an [`InequalityReport`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linops::{
    self, adjoint, block_pair, numerical_radius, operator_norm, power_series_apply, resolvent_with_radius,
    similarity_scale, spectral_radius, weighted_conjugate, PositiveOperator, EIG_TOL,
};
use crate::perron::{regularize, regularizer, OperatorFamily, PerronPair};

/// Default relative tolerance for inequality checks.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Default number of Levinger curve samples on `[0, 1]`.
pub const DEFAULT_SAMPLES: usize = 51;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    Lemma1,
    Lemma2,
    Sum,
    ConvexSum,
    SeriesSum,
    ResolventSum,
    SharpeningWeak,
    SharpeningStrong,
    LevingerFloor,
    LevingerMonotone,
    NrLinear,
    NrSquare,
    NrSymmetric,
    PairNorm,
    PairNormT,
    DecreasingLimit,
    AdjointRadius,
}

impl TheoremId {
    pub const ALL: [TheoremId; 17] = [
        TheoremId::Lemma1,
        TheoremId::Lemma2,
        TheoremId::Sum,
        TheoremId::ConvexSum,
        TheoremId::SeriesSum,
        TheoremId::ResolventSum,
        TheoremId::SharpeningWeak,
        TheoremId::SharpeningStrong,
        TheoremId::LevingerFloor,
        TheoremId::LevingerMonotone,
        TheoremId::NrLinear,
        TheoremId::NrSquare,
        TheoremId::NrSymmetric,
        TheoremId::PairNorm,
        TheoremId::PairNormT,
        TheoremId::DecreasingLimit,
        TheoremId::AdjointRadius,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::Lemma1 => "lemma1",
            TheoremId::Lemma2 => "lemma2",
            TheoremId::Sum => "sum",
            TheoremId::ConvexSum => "convex_sum",
            TheoremId::SeriesSum => "series_sum",
            TheoremId::ResolventSum => "resolvent_sum",
            TheoremId::SharpeningWeak => "sharpening_weak",
            TheoremId::SharpeningStrong => "sharpening_strong",
            TheoremId::LevingerFloor => "levinger_floor",
            TheoremId::LevingerMonotone => "levinger_monotone",
            TheoremId::NrLinear => "nr_linear",
            TheoremId::NrSquare => "nr_square",
            TheoremId::NrSymmetric => "nr_symmetric",
            TheoremId::PairNorm => "pair_norm",
            TheoremId::PairNormT => "pair_norm_t",
            TheoremId::DecreasingLimit => "decreasing_limit",
            TheoremId::AdjointRadius => "adjoint_radius",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown theorem id '{s}'")))
    }
}

/// Both sides of one inequality `lhs >= rhs`.
///
/// `pass` holds iff `margin >= -tol * max(1, |lhs|, |rhs|)`. Two-sided checks
/// `a = b` are reported as `min(a, b) >= max(a, b)`, so their margin is `-|a - b|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub theorem_id: TheoremId,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tol: f64,
    pub pass: bool,
    pub context: String,
}

impl InequalityReport {
    pub fn new(theorem_id: TheoremId, lhs: f64, rhs: f64, tol: f64, context: impl Into<String>) -> Self {
        let margin = lhs - rhs;
        let mut rep = InequalityReport {
            theorem_id,
            lhs,
            rhs,
            margin,
            tol,
            pass: false,
            context: context.into(),
        };
        rep.pass = rep.passes_at(tol);
        rep
    }

    pub fn equality(theorem_id: TheoremId, a: f64, b: f64, tol: f64, context: impl Into<String>) -> Self {
        Self::new(theorem_id, a.min(b), a.max(b), tol, context)
    }

    pub fn scale(&self) -> f64 {
        1f64.max(self.lhs.abs()).max(self.rhs.abs())
    }

    pub fn passes_at(&self, tol: f64) -> bool {
        self.margin >= -tol * self.scale()
    }

    /// Re-judge at a different tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.pass = self.passes_at(tol);
        self
    }
}

/// Short hexadecimal FNV-1a digest of an operator's entries and weights.
pub fn digest(op: &PositiveOperator) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |x: f64| {
        for b in x.to_bits().to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    op.entries().iter().for_each(|v| eat(*v));
    op.weights().unwrap_or(&[]).iter().for_each(|v| eat(*v));
    format!("{:016x}", h)
}

fn ctx(op: &PositiveOperator, extra: &str) -> String {
    if extra.is_empty() {
        format!("dim={};op={}", op.dim(), digest(op))
    } else {
        format!("dim={};op={};{extra}", op.dim(), digest(op))
    }
}

/// `exp(integral h log(x))` with `exp(-inf) = 0`: any zero of `x` where `h w > 0`
/// short-circuits to zero before a logarithm is taken.
pub fn exp_weighted_log(op: &PositiveOperator, h: &[f64], x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, (hi, xi)) in h.iter().zip(x).enumerate() {
        let mass = op.weight(i) * hi;
        if mass <= 0.0 {
            continue;
        }
        if *xi <= 0.0 {
            return 0.0;
        }
        acc += mass * xi.ln();
    }
    acc.exp()
}

fn weighted_mean(op: &PositiveOperator, h: &[f64], x: &[f64]) -> f64 {
    h.iter().zip(x).enumerate().map(|(i, (hi, xi))| op.weight(i) * hi * xi).sum()
}

fn require_len(op: &PositiveOperator, v: &[f64], what: &str) -> Result<()> {
    if v.len() != op.dim() {
        return Err(Error::domain(format!(
            "{what} has length {}, expected {}",
            v.len(),
            op.dim()
        )));
    }
    Ok(())
}

fn check_pair(k: &PositiveOperator, pair: &PerronPair) -> Result<()> {
    require_len(k, &pair.f, "Perron vector")?;
    let (rf, rg) = pair.residuals(k);
    let tol = 10.0 * EIG_TOL * pair.r.max(1.0);
    if rf > tol || rg > tol {
        return Err(Error::domain(format!(
            "Perron pair does not match the operator (residuals {rf:e}, {rg:e})"
        )));
    }
    Ok(())
}

/// The weighted-multiplier inequality and the three-term chain, for `K / r(K)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReports {
    /// `<D K E u, v> >= exp(int h log(d e))`.
    pub scaled: InequalityReport,
    /// `<K u, v> >= exp(int h log((Ku/u)(f/Kf)))`.
    pub chain_upper: InequalityReport,
    /// `exp(int h log((Ku/u)(f/Kf))) >= 1`.
    pub chain_lower: InequalityReport,
}

impl LemmaReports {
    pub fn all(&self) -> [&InequalityReport; 3] {
        [&self.scaled, &self.chain_upper, &self.chain_lower]
    }
}

pub fn lemma_pair_bound(
    k: &PositiveOperator,
    pair: &PerronPair,
    u: &[f64],
    d: &[f64],
    e: &[f64],
) -> Result<LemmaReports> {
    check_pair(k, pair)?;
    require_len(k, u, "u")?;
    if let Some(i) = u.iter().position(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::domain(format!("u must be strictly positive; component {i} is {}", u[i])));
    }
    let kn = k.scale(1.0 / pair.r)?;
    let v: Vec<f64> = pair.h.iter().zip(u).map(|(h, u)| h / u).collect();

    let dke = weighted_conjugate(&kn, d, e)?;
    let lhs1 = kn.inner(&dke.apply(u), &v);
    let de: Vec<f64> = d.iter().zip(e).map(|(a, b)| a * b).collect();
    let rhs1 = exp_weighted_log(&kn, &pair.h, &de);

    let ku = kn.apply(u);
    let kf = kn.apply(&pair.f);
    let lhs2 = kn.inner(&ku, &v);
    let ratio: Vec<f64> = (0..k.dim())
        .map(|i| (ku[i] / u[i]) * (pair.f[i] / kf[i]))
        .collect();
    let middle = exp_weighted_log(&kn, &pair.h, &ratio);

    let c = ctx(k, &format!("r={}", pair.r));
    Ok(LemmaReports {
        scaled: InequalityReport::new(TheoremId::Lemma1, lhs1, rhs1, DEFAULT_TOL, c.clone()),
        chain_upper: InequalityReport::new(TheoremId::Lemma2, lhs2, middle, DEFAULT_TOL, format!("{c};leg=upper")),
        chain_lower: InequalityReport::new(TheoremId::Lemma2, middle, 1.0, DEFAULT_TOL, format!("{c};leg=lower")),
    })
}

fn require_family_len<T>(family: &OperatorFamily, v: &[T], what: &str) -> Result<()> {
    if v.len() != family.len() {
        return Err(Error::domain(format!(
            "{what} has {} entries for a family of {}",
            v.len(),
            family.len()
        )));
    }
    Ok(())
}

fn family_ctx(family: &OperatorFamily) -> String {
    let kind = match &family.kind {
        crate::perron::FamilyKind::Similarity { .. } => "similarity",
        crate::perron::FamilyKind::AdjointPair => "adjoint-pair",
        crate::perron::FamilyKind::Series { .. } => "series",
        crate::perron::FamilyKind::Explicit { .. } => "explicit",
    };
    format!(
        "dim={};n={};family={kind};op={}",
        family.dim(),
        family.len(),
        digest(&family.members[0])
    )
}

/// `r(sum D_i K_i E_i) >= sum r(K_i) exp(int h log(d_i e_i))`.
pub fn sum_bound(family: &OperatorFamily, ds: &[Vec<f64>], es: &[Vec<f64>]) -> Result<InequalityReport> {
    require_family_len(family, ds, "ds")?;
    require_family_len(family, es, "es")?;
    let terms = family
        .members
        .iter()
        .zip(ds.iter().zip(es))
        .map(|(k, (d, e))| weighted_conjugate(k, d, e))
        .collect::<Result<Vec<_>>>()?;
    let lhs = spectral_radius(&PositiveOperator::sum(&terms)?)?;
    let base = &family.members[0];
    let rhs = family
        .pairs
        .iter()
        .zip(ds.iter().zip(es))
        .map(|(p, (d, e))| {
            let de: Vec<f64> = d.iter().zip(e).map(|(a, b)| a * b).collect();
            p.r * exp_weighted_log(base, &family.h, &de)
        })
        .sum();
    Ok(InequalityReport::new(TheoremId::Sum, lhs, rhs, DEFAULT_TOL, family_ctx(family)))
}

/// `r(sum t_i K_i) >= sum t_i r(K_i)`.
pub fn convex_sum_bound(family: &OperatorFamily, ts: &[f64]) -> Result<InequalityReport> {
    require_family_len(family, ts, "ts")?;
    if ts.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::domain("convex-sum weights must be positive"));
    }
    let terms = family
        .members
        .iter()
        .zip(ts)
        .map(|(k, t)| k.scale(*t))
        .collect::<Result<Vec<_>>>()?;
    let lhs = spectral_radius(&PositiveOperator::sum(&terms)?)?;
    let rhs = family.pairs.iter().zip(ts).map(|(p, t)| t * p.r).sum();
    Ok(InequalityReport::new(TheoremId::ConvexSum, lhs, rhs, DEFAULT_TOL, family_ctx(family)))
}

/// `r(sum p_i(K_i)) >= sum p_i(r(K_i))` for non-negative coefficient polynomials.
pub fn series_sum_bound(family: &OperatorFamily, polys: &[Vec<f64>]) -> Result<InequalityReport> {
    require_family_len(family, polys, "polys")?;
    let terms = family
        .members
        .iter()
        .zip(polys)
        .map(|(k, p)| power_series_apply(k, p, p.len()))
        .collect::<Result<Vec<_>>>()?;
    let lhs = spectral_radius(&PositiveOperator::sum(&terms)?)?;
    let rhs = family
        .pairs
        .iter()
        .zip(polys)
        .map(|(pair, p)| linops::eval_poly(p, pair.r))
        .sum();
    Ok(InequalityReport::new(TheoremId::SeriesSum, lhs, rhs, DEFAULT_TOL, family_ctx(family)))
}

/// `r(sum (s_i - K_i)^{-1}) >= sum 1 / (s_i - r(K_i))`.
pub fn resolvent_sum_bound(family: &OperatorFamily, ss: &[f64]) -> Result<InequalityReport> {
    require_family_len(family, ss, "ss")?;
    let terms = family
        .members
        .iter()
        .zip(family.pairs.iter().zip(ss))
        .map(|(k, (p, s))| resolvent_with_radius(k, *s, p.r))
        .collect::<Result<Vec<_>>>()?;
    let lhs = spectral_radius(&PositiveOperator::sum(&terms)?)?;
    let rhs = family.pairs.iter().zip(ss).map(|(p, s)| 1.0 / (s - p.r)).sum();
    Ok(InequalityReport::new(
        TheoremId::ResolventSum,
        lhs,
        rhs,
        DEFAULT_TOL,
        format!("{};s={ss:?}", family_ctx(family)),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpeningReports {
    /// `r(D K) >= r(K) exp(int h log d)`.
    pub weaker: InequalityReport,
    /// `r(D T) >= r(T) int h d` with `T = (s - K)^{-1}`.
    pub stronger: InequalityReport,
    /// `int h d >= exp(int h log d)`.
    pub jensen: InequalityReport,
}

impl SharpeningReports {
    pub fn all(&self) -> [&InequalityReport; 3] {
        [&self.weaker, &self.stronger, &self.jensen]
    }
}

pub fn resolvent_sharpening(k: &PositiveOperator, pair: &PerronPair, d: &[f64], s: f64) -> Result<SharpeningReports> {
    check_pair(k, pair)?;
    require_len(k, d, "d")?;
    let ones = vec![1.0; k.dim()];
    let t = resolvent_with_radius(k, s, pair.r)?;
    let rt = 1.0 / (s - pair.r);
    let geo = exp_weighted_log(k, &pair.h, d);
    let arith = weighted_mean(k, &pair.h, d);

    let lhs_weak = spectral_radius(&weighted_conjugate(k, d, &ones)?)?;
    let lhs_strong = spectral_radius(&weighted_conjugate(&t, d, &ones)?)?;
    let c = ctx(k, &format!("s={s}"));
    Ok(SharpeningReports {
        weaker: InequalityReport::new(TheoremId::SharpeningWeak, lhs_weak, pair.r * geo, DEFAULT_TOL, c.clone()),
        stronger: InequalityReport::new(TheoremId::SharpeningStrong, lhs_strong, rt * arith, DEFAULT_TOL, c.clone()),
        jensen: InequalityReport::new(TheoremId::SharpeningStrong, arith, geo, DEFAULT_TOL, format!("{c};leg=jensen")),
    })
}

/// `phi(t) = r(t D K D^{-1} + (1 - t) K*)` sampled on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevingerCurve {
    pub ts: Vec<f64>,
    pub phis: Vec<f64>,
    pub r_base: f64,
    /// Most negative forward difference on `[0, 1/2]` (zero if none).
    pub monotone_up_violation: f64,
    /// Most positive forward difference on `[1/2, 1]` (zero if none).
    pub monotone_down_violation: f64,
}

impl LevingerCurve {
    pub fn floor_margin(&self) -> f64 {
        self.phis.iter().fold(f64::INFINITY, |m, p| m.min(*p)) - self.r_base
    }

    fn max_phi(&self) -> f64 {
        self.phis.iter().fold(0.0, |m, p| m.max(*p))
    }

    /// `max |phi(t_k) - phi(t_{n-1-k})|`, meaningful when the samples are mirror-symmetric.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.phis.len();
        (0..n).map(|k| (self.phis[k] - self.phis[n - 1 - k]).abs()).fold(0.0, f64::max)
    }

    pub fn floor_report(&self, tol: f64) -> InequalityReport {
        let lo = self.phis.iter().fold(f64::INFINITY, |m, p| m.min(*p));
        InequalityReport::new(
            TheoremId::LevingerFloor,
            lo,
            self.r_base,
            tol,
            format!("samples={}", self.ts.len()),
        )
    }

    /// Monotonicity as one report: margin is the worst signed slack of the
    /// forward differences (up side negated on the down side).
    pub fn monotone_report(&self, tol: f64) -> InequalityReport {
        let worst = self.monotone_up_violation.min(-self.monotone_down_violation);
        let top = self.max_phi();
        InequalityReport::new(
            TheoremId::LevingerMonotone,
            top + worst,
            top,
            tol,
            format!("samples={}", self.ts.len()),
        )
    }
}

/// Evenly spaced samples `0, 1/(m-1), ..., 1`.
pub fn uniform_samples(m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..m).map(|k| k as f64 / (m - 1) as f64).collect(),
    }
}

/// `phi(t)` given the precomputed `D K D^{-1}` and `K*`.
pub fn levinger_phi(scaled: &PositiveOperator, star: &PositiveOperator, t: f64) -> Result<f64> {
    spectral_radius(&scaled.combine(t, star, 1.0 - t)?)
}

pub fn levinger_curve(k: &PositiveOperator, d: &[f64], ts: &[f64]) -> Result<LevingerCurve> {
    if ts.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::domain("Levinger samples must lie in [0, 1]"));
    }
    if ts.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::domain("Levinger samples must be strictly increasing"));
    }
    let scaled = similarity_scale(k, d)?;
    let star = adjoint(k);
    let phis = ts
        .iter()
        .map(|t| levinger_phi(&scaled, &star, *t))
        .collect::<Result<Vec<_>>>()?;
    let mut up = 0.0f64;
    let mut down = 0.0f64;
    for i in 1..ts.len() {
        let diff = phis[i] - phis[i - 1];
        if ts[i] <= 0.5 {
            up = up.min(diff);
        } else if ts[i - 1] >= 0.5 {
            down = down.max(diff);
        }
    }
    Ok(LevingerCurve {
        ts: ts.to_vec(),
        phis,
        r_base: spectral_radius(k)?,
        monotone_up_violation: up,
        monotone_down_violation: down,
    })
}

/// Values along both numerical-radius chains for `M = t A + (1 - t) A*`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericalRadiusChain {
    pub t: f64,
    pub norm_a: f64,
    pub norm_m: f64,
    pub w_m: f64,
    pub w_a: f64,
    pub r_a: f64,
    pub norm_m2: f64,
    pub w_m2: f64,
    pub w_a2: f64,
    pub reports: Vec<InequalityReport>,
}

pub fn numerical_radius_chain(a: &PositiveOperator, t: f64) -> Result<NumericalRadiusChain> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t must lie in [0, 1], got {t}")));
    }
    let m = a.combine(t, &adjoint(a), 1.0 - t)?;
    let m2 = m.compose(&m)?;
    let a2 = a.compose(a)?;
    let norm_a = operator_norm(a)?;
    let norm_m = operator_norm(&m)?;
    let w_m = numerical_radius(&m)?;
    let w_a = numerical_radius(a)?;
    let r_a = spectral_radius(a)?;
    let norm_m2 = operator_norm(&m2)?;
    let w_m2 = numerical_radius(&m2)?;
    let w_a2 = numerical_radius(&a2)?;

    let c = ctx(a, &format!("t={t}"));
    let leg = |name: &str| format!("{c};leg={name}");
    use TheoremId::{NrLinear, NrSquare};
    let reports = vec![
        InequalityReport::new(NrLinear, norm_a, norm_m, DEFAULT_TOL, leg("norm_a>=norm_m")),
        InequalityReport::new(NrLinear, norm_m, w_m, DEFAULT_TOL, leg("norm_m>=w_m")),
        InequalityReport::equality(NrLinear, w_m, w_a, DEFAULT_TOL, leg("w_m=w_a")),
        InequalityReport::new(NrLinear, w_a, r_a, DEFAULT_TOL, leg("w_a>=r_a")),
        InequalityReport::new(NrSquare, norm_m2, w_m2, DEFAULT_TOL, leg("norm_m2>=w_m2")),
        InequalityReport::new(NrSquare, w_m2, w_a2, DEFAULT_TOL, leg("w_m2>=w_a2")),
        InequalityReport::new(NrSquare, w_a2, r_a * r_a, DEFAULT_TOL, leg("w_a2>=r_a^2")),
    ];
    Ok(NumericalRadiusChain {
        t,
        norm_a,
        norm_m,
        w_m,
        w_a,
        r_a,
        norm_m2,
        w_m2,
        w_a2,
        reports,
    })
}

/// `r(D A D^{-1} + A*) >= 2 r(A)`.
pub fn symmetric_similarity_bound(a: &PositiveOperator, d: &[f64]) -> Result<InequalityReport> {
    let lhs = spectral_radius(&similarity_scale(a, d)?.add(&adjoint(a))?)?;
    let rhs = 2.0 * spectral_radius(a)?;
    Ok(InequalityReport::new(TheoremId::NrSymmetric, lhs, rhs, DEFAULT_TOL, ctx(a, "")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairNormResult {
    pub report: InequalityReport,
    /// `r(T)^2 = r(AB)` and `||T + T*|| = ||A + B*||` for `T = [[0, A], [B, 0]]`;
    /// with `t`, also `||t T + (1-t) T*|| = max(...)`.
    pub identities: Vec<InequalityReport>,
}

impl PairNormResult {
    pub fn all(&self) -> impl Iterator<Item = &InequalityReport> {
        std::iter::once(&self.report).chain(&self.identities)
    }
}

pub fn pair_norm_bound(a: &PositiveOperator, b: &PositiveOperator, t: Option<f64>) -> Result<PairNormResult> {
    if let Some(t) = t {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::domain(format!("t must lie in [0, 1], got {t}")));
        }
    }
    let tee = block_pair(a, b)?;
    let tee_star = adjoint(&tee);
    let r_ab = spectral_radius(&a.compose(b)?)?;
    let r_t = spectral_radius(&tee)?;
    let a_bstar = a.add(&adjoint(b))?;
    let norm_sum = operator_norm(&a_bstar)?;
    let norm_t_sum = operator_norm(&tee.add(&tee_star)?)?;

    let id = match t {
        None => TheoremId::PairNorm,
        Some(_) => TheoremId::PairNormT,
    };
    let c = format!("dim={};a={};b={}", a.dim(), digest(a), digest(b));
    let mut identities = vec![
        InequalityReport::equality(id, r_t * r_t, r_ab, EIG_TOL, format!("{c};leg=r(T)^2=r(AB)")),
        InequalityReport::equality(id, norm_t_sum, norm_sum, EIG_TOL, format!("{c};leg=|T+T*|=|A+B*|")),
    ];
    let report = match t {
        None => InequalityReport::new(id, norm_sum, 2.0 * r_ab.sqrt(), DEFAULT_TOL, c),
        Some(t) => {
            let n1 = operator_norm(&a.combine(t, &adjoint(b), 1.0 - t)?)?;
            let n2 = operator_norm(&b.combine(t, &adjoint(a), 1.0 - t)?)?;
            let nt = operator_norm(&tee.combine(t, &tee_star, 1.0 - t)?)?;
            identities.push(InequalityReport::equality(
                id,
                nt,
                n1.max(n2),
                EIG_TOL,
                format!("{c};t={t};leg=|tT+(1-t)T*|=max"),
            ));
            InequalityReport::new(id, n1.max(n2), r_ab.sqrt(), DEFAULT_TOL, format!("{c};t={t}"))
        }
    };
    Ok(PairNormResult { report, identities })
}

/// `r(K + eps K0)` along a descending `eps` list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecreasingLimit {
    pub eps: Vec<f64>,
    pub radii: Vec<f64>,
    pub r_base: f64,
    pub r_regularizer: f64,
    pub report: InequalityReport,
}

/// Slack allowed between `r(K + eps K0)` and `r(K)` at the final `eps`.
pub fn limit_slack(eps: f64, r_regularizer: f64) -> f64 {
    10.0 * eps * r_regularizer + 1e-8
}

/// The sequence must be non-increasing, stay above `r(K)` and end within
/// [`limit_slack`] of it. The report carries the worst of these legs.
pub fn decreasing_limit_check(k: &PositiveOperator, eps_list: &[f64]) -> Result<DecreasingLimit> {
    if eps_list.is_empty() {
        return Err(Error::domain("eps list must not be empty"));
    }
    if eps_list.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::domain("eps values must be positive"));
    }
    if eps_list.windows(2).any(|p| p[0] <= p[1]) {
        return Err(Error::domain("eps list must be strictly descending"));
    }
    let r_base = spectral_radius(k)?;
    let r_regularizer = spectral_radius(&regularizer(k))?;
    let radii = eps_list
        .iter()
        .map(|e| spectral_radius(&regularize(k, *e)?))
        .collect::<Result<Vec<_>>>()?;

    // (lhs, rhs, leg) with lhs >= rhs expected
    let mut legs: Vec<(f64, f64, String)> = radii
        .windows(2)
        .enumerate()
        .map(|(i, w)| (w[0], w[1], format!("step{i}")))
        .collect();
    let last = *radii.last().expect("non-empty");
    legs.push((last, r_base, "floor".into()));
    let final_eps = *eps_list.last().expect("non-empty");
    legs.push((r_base + limit_slack(final_eps, r_regularizer), last, "limit".into()));
    let (lhs, rhs, leg) = legs
        .into_iter()
        .min_by(|x, y| (x.0 - x.1).total_cmp(&(y.0 - y.1)))
        .expect("at least two legs");
    let report = InequalityReport::new(
        TheoremId::DecreasingLimit,
        lhs,
        rhs,
        DEFAULT_TOL,
        ctx(k, &format!("eps={}..{};leg={leg}", eps_list[0], final_eps)),
    );
    Ok(DecreasingLimit {
        eps: eps_list.to_vec(),
        radii,
        r_base,
        r_regularizer,
        report,
    })
}

/// `r(K*) = r(K)`.
pub fn adjoint_radius_check(k: &PositiveOperator) -> Result<InequalityReport> {
    let r = spectral_radius(k)?;
    let rs = spectral_radius(&adjoint(k))?;
    Ok(InequalityReport::equality(TheoremId::AdjointRadius, rs, r, EIG_TOL, ctx(k, "")))
}
