//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line to stderr
//! (uncaptured) and then asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use speclab::bounds::{self, TheoremId};
use speclab::falsify::{random_operator, run_campaign, sample_multiplier, CampaignConfig};
use speclab::linops::{adjoint, spectral_radius, PositiveOperator};
use speclab::nystrom::{build_grid, discretize_kernel, KernelName, KernelSpec, Scheme};
use speclab::perron::{make_family, perron_pair, regularizer, FamilyKind};

/// Independent closed forms and a naive eigen-oracle.
mod oracle {
    /// Largest eigenvalue modulus of `[[a, b], [c, d]]` from the characteristic polynomial.
    pub fn radius_2x2(a: f64, b: f64, c: f64, d: f64) -> f64 {
        let tr = a + d;
        let det = a * d - b * c;
        let disc = tr * tr / 4.0 - det;
        if disc >= 0.0 {
            (tr / 2.0).abs() + disc.sqrt()
        } else {
            det.sqrt()
        }
    }

    /// Plain power iteration from the all-ones vector; valid for strictly positive matrices.
    pub fn perron_root(a: &[Vec<f64>]) -> f64 {
        let n = a.len();
        let mut v = vec![1.0; n];
        let mut lam = 0.0;
        for _ in 0..5000 {
            let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[i][j] * v[j]).sum()).collect();
            let norm = w.iter().cloned().fold(0.0, f64::max);
            lam = norm;
            v = w.iter().map(|x| x / norm).collect();
        }
        lam
    }

    /// Midpoint Nystrom root of `k = x y`: `sum_i x_i^2 / n = 1/3 - 1/(12 n^2)`.
    pub fn product_kernel_midpoint(n: usize) -> f64 {
        1.0 / 3.0 - 1.0 / (12.0 * (n * n) as f64)
    }
}

fn line(id: usize, name: &str, ok: bool, detail: &str, elapsed: Duration) {
    let word = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "[{word}] criterion {id} {name}: {detail} ({:.3}s)",
        elapsed.as_secs_f64()
    );
}

/// Run `body`, print its verdict line, then fail the test if it reported failures.
fn criterion(id: usize, name: &str, limit: Option<Duration>, body: impl FnOnce(&mut Vec<String>) -> String) {
    let start = Instant::now();
    let mut failures = Vec::new();
    let detail = body(&mut failures);
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            failures.push(format!("runtime {:.3}s exceeds {:.3}s", elapsed.as_secs_f64(), limit.as_secs_f64()));
        }
    }
    let ok = failures.is_empty();
    let shown = if ok { detail } else { format!("{detail}; {}", failures.join("; ")) };
    line(id, name, ok, &shown, elapsed);
    assert!(ok, "criterion {id} failed: {}", failures.join("; "));
}

fn check(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok && failures.len() < 10 {
        failures.push(msg());
    }
}

fn op(rows: &[&[f64]]) -> PositiveOperator {
    PositiveOperator::from_rows(rows).unwrap()
}

fn exchange() -> PositiveOperator {
    op(&[&[0.0, 1.0], &[1.0, 0.0]])
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn c1_equality_fixture() {
    criterion(1, "equality fixture", None, |fails| {
        let k = exchange();
        let d = [4.0, 1.0];
        let start = Instant::now();
        let fam = make_family(&k, FamilyKind::Similarity { scales: vec![] }, None).unwrap();
        let rep = bounds::sum_bound(&fam, &[d.to_vec()], &[vec![1.0, 1.0]]).unwrap();
        let pair = perron_pair(&k, None).unwrap();
        let integral: f64 = pair.h.iter().zip(d).map(|(h, d)| h * d).sum();
        let elapsed = start.elapsed();

        let want = oracle::radius_2x2(0.0, 4.0, 1.0, 0.0);
        check(fails, (rep.lhs - want).abs() <= 1e-12, || format!("r(DK) = {} vs {want}", rep.lhs));
        check(fails, (rep.rhs - 2.0).abs() <= 1e-12, || format!("rhs = {}", rep.rhs));
        check(fails, rep.margin.abs() <= 1e-12, || format!("|margin| = {:e}", rep.margin.abs()));
        check(fails, (integral - 2.5).abs() <= 1e-12 && integral > rep.lhs, || format!("int h d = {integral}"));
        check(fails, elapsed < Duration::from_millis(1), || format!("evaluation took {elapsed:?}"));
        format!(
            "r(DK) = {}, rhs = {}, margin = {:e}, int h d = {integral}, eval {:?}",
            rep.lhs, rep.rhs, rep.margin, elapsed
        )
    });
}

#[test]
fn c2_levinger_suite() {
    criterion(2, "Levinger suite", Some(Duration::from_secs(30)), |fails| {
        let ts = bounds::uniform_samples(51);
        let mut worst_floor = f64::INFINITY;
        let mut worst_sym = 0.0f64;
        for trial in 0..500u64 {
            let k = random_operator(1_000 + trial, 8, 1.0, 1.0);
            let d_rand = sample_multiplier(&mut rng(trial), 8);
            for (d, symmetric) in [(vec![1.0; 8], true), (d_rand, false)] {
                let c = bounds::levinger_curve(&k, &d, &ts).unwrap();
                let r = c.r_base;
                if symmetric && trial % 50 == 0 {
                    let want = oracle::perron_root(&k.rows());
                    check(fails, (r - want).abs() <= 1e-10 * want, || format!("trial {trial}: r = {r} vs oracle {want}"));
                }
                let tol = 1e-8 * r;
                worst_floor = worst_floor.min(c.floor_margin() / r);
                check(fails, c.floor_margin() >= -tol, || format!("trial {trial}: floor margin {:e}", c.floor_margin()));
                check(fails, c.monotone_up_violation >= -tol, || {
                    format!("trial {trial}: rise violation {:e}", c.monotone_up_violation)
                });
                check(fails, c.monotone_down_violation <= tol, || {
                    format!("trial {trial}: fall violation {:e}", c.monotone_down_violation)
                });
                if symmetric {
                    worst_sym = worst_sym.max(c.symmetry_defect() / r);
                    check(fails, c.symmetry_defect() <= tol, || format!("trial {trial}: asymmetry {:e}", c.symmetry_defect()));
                }
            }
        }
        let a = op(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let c = bounds::levinger_curve(&a, &[1.0, 1.0], &ts).unwrap();
        let closed = c
            .ts
            .iter()
            .zip(&c.phis)
            .map(|(t, p)| (p - (t * (1.0 - t)).sqrt()).abs())
            .fold(0.0, f64::max);
        check(fails, closed <= 1e-10, || format!("closed form deviation {closed:e}"));
        format!("1000 curves, worst floor/r {worst_floor:e}, worst asymmetry/r {worst_sym:e}, closed-form dev {closed:e}")
    });
}

#[test]
fn c3_sum_campaign() {
    criterion(3, "Sum campaign", Some(Duration::from_secs(60)), |fails| {
        let cfg = CampaignConfig {
            seed: 42,
            trials: 1000,
            dim: 6,
            density: 1.0,
            family_size: 3,
            theorem_set: vec![TheoremId::Sum],
            tol: 1e-8,
            ..CampaignConfig::default()
        };
        let plain = run_campaign(&cfg).unwrap();
        let s = plain.stats(TheoremId::Sum).unwrap();
        check(fails, s.count == 1000, || format!("{} trials evaluated, {} failed", s.count, s.failures));
        check(fails, s.violations.is_empty(), || format!("{} violations", s.violations.len()));

        let injected = run_campaign(&CampaignConfig {
            inject_fixture: true,
            ..cfg
        })
        .unwrap();
        let si = injected.stats(TheoremId::Sum).unwrap();
        let fixture_min = injected
            .rows
            .iter()
            .filter(|r| r.context.contains("fixture"))
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min);
        check(fails, si.near_equality_count >= 1 && fixture_min < 1e-6, || {
            format!("no near-equality witness with fixture (min fixture margin {fixture_min:e})")
        });
        check(fails, si.violations.is_empty(), || "violations with fixture".into());
        format!(
            "{} trials, 0 violations, min margin {:e}, median {:e}; fixture margin {fixture_min:e}",
            s.count, s.min_margin, s.median_margin
        )
    });
}

#[test]
fn c4_lemma_chain() {
    criterion(4, "Lemma chain", None, |fails| {
        let mut worst = f64::INFINITY;
        for trial in 0..1000u64 {
            let k = random_operator(2_000 + trial, 6, 1.0, 1.0);
            let pair = perron_pair(&k, None).unwrap();
            let mut g = rng(trial);
            let u = sample_multiplier(&mut g, 6);
            let ones = vec![1.0; 6];
            let rep = bounds::lemma_pair_bound(&k, &pair, &u, &ones, &ones).unwrap();
            let (top, mid, floor) = (rep.chain_upper.lhs, rep.chain_upper.rhs, rep.chain_lower.rhs);
            worst = worst.min(top - mid).min(mid - 1.0);
            check(fails, floor == 1.0 && top >= mid - 1e-10 && mid >= 1.0 - 1e-10, || {
                format!("trial {trial}: chain ({top}, {mid}, {floor})")
            });
        }
        let k = exchange();
        let pair = perron_pair(&k, None).unwrap();
        let rep = bounds::lemma_pair_bound(&k, &pair, &[1.0, 2.0], &[1.0, 1.0], &[1.0, 1.0]).unwrap();
        // <Ku, v> with u = (1,2), v = h/u = (1/2, 1/4): 2*(1/2) + 1*(1/4) = 5/4
        let got = (rep.chain_upper.lhs, rep.chain_upper.rhs, rep.chain_lower.rhs);
        check(
            fails,
            (got.0 - 1.25).abs() <= 1e-12 && (got.1 - 1.0).abs() <= 1e-12 && got.2 == 1.0,
            || format!("fixture {got:?}"),
        );
        format!("1000 trials, worst chain slack {worst:e}; fixture {got:?}")
    });
}

#[test]
fn c5_resolvent_sharpening() {
    criterion(5, "resolvent sharpening", None, |fails| {
        let mut worst = f64::INFINITY;
        for trial in 0..500u64 {
            let k = random_operator(3_000 + trial, 6, 1.0, 1.0);
            let pair = perron_pair(&k, None).unwrap();
            let mut g = rng(10_000 + trial);
            let d = sample_multiplier(&mut g, 6);
            let s = pair.r * (1.0 + g.gen_range(0.1..2.0));
            let rep = bounds::resolvent_sharpening(&k, &pair, &d, s).unwrap();
            for r in rep.all() {
                worst = worst.min(r.margin / r.scale());
                check(fails, r.margin >= -1e-8 * r.scale(), || format!("trial {trial}: {r:?}"));
            }
            check(fails, rep.jensen.rhs >= 0.0 && rep.weaker.rhs >= 0.0, || format!("trial {trial}: negative bound"));
        }
        let k = exchange();
        let pair = perron_pair(&k, None).unwrap();
        let rep = bounds::resolvent_sharpening(&k, &pair, &[4.0, 1.0], 2.0).unwrap();
        // T = (2 - K)^{-1} = [[2,1],[1,2]]/3; DT = [[8,4],[1,2]]/3
        let want = [
            oracle::radius_2x2(8.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0),
            2.5,
            2.0,
        ];
        let got = [rep.stronger.lhs, rep.stronger.rhs, rep.weaker.rhs];
        for (g, w) in got.iter().zip(want) {
            check(fails, (g - w).abs() <= 1e-4 * w, || format!("fixture {got:?} vs {want:?}"));
        }
        format!("500 trials, worst relative margin {worst:e}; fixture {got:?}")
    });
}

#[test]
fn c6_numerical_radius_suite() {
    criterion(6, "numerical-radius suite", None, |fails| {
        let mut worst_gap = 0.0f64;
        for trial in 0..1000u64 {
            let a = random_operator(4_000 + trial, 8, 0.6, 1.0);
            for t in [0.0, 0.3, 0.5, 1.0] {
                let chain = bounds::numerical_radius_chain(&a, t).unwrap();
                for r in &chain.reports {
                    check(fails, r.passes_at(1e-8), || format!("trial {trial} t={t}: {r:?}"));
                }
                let gap = (chain.w_m - chain.w_a).abs();
                worst_gap = worst_gap.max(gap);
                check(fails, gap <= 1e-10, || format!("trial {trial} t={t}: |w(M) - w(A)| = {gap:e}"));
            }
            let d = sample_multiplier(&mut rng(20_000 + trial), 8);
            let rep = bounds::symmetric_similarity_bound(&a, &d).unwrap();
            check(fails, rep.lhs >= rep.rhs - 1e-8, || format!("trial {trial}: {rep:?}"));
        }
        format!("1000 matrices x 4 t values, worst |w(M) - w(A)| {worst_gap:e}")
    });
}

#[test]
fn c7_pair_norm() {
    criterion(7, "pair norm", None, |fails| {
        let a = op(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let b = op(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let res = bounds::pair_norm_bound(&a, &b, None).unwrap();
        // A + B* = [[0,2],[0,0]] has norm 2; AB = [[1,0],[0,0]] has radius 1
        check(fails, (res.report.lhs - 2.0).abs() <= 1e-12 && (res.report.rhs - 2.0).abs() <= 1e-12, || {
            format!("fixture {:?}", res.report)
        });
        let mut worst_id = 0.0f64;
        for trial in 0..1000u64 {
            let a = random_operator(5_000 + trial, 6, 0.7, 1.0);
            let b = random_operator(50_000 + trial, 6, 0.7, 1.0);
            let t = rng(trial).gen::<f64>();
            for res in [
                bounds::pair_norm_bound(&a, &b, None).unwrap(),
                bounds::pair_norm_bound(&a, &b, Some(t)).unwrap(),
            ] {
                check(fails, res.report.passes_at(1e-8), || format!("trial {trial}: {:?}", res.report));
                for id in &res.identities {
                    worst_id = worst_id.max(-id.margin / id.scale());
                    check(fails, id.passes_at(1e-10), || format!("trial {trial}: identity {id:?}"));
                }
            }
        }
        format!("fixture 2 = 2; 1000 pairs x 2 forms, worst identity defect {worst_id:e}")
    });
}

fn positive_kernels() -> [KernelSpec; 2] {
    [KernelSpec::named(KernelName::Gauss), KernelSpec::named(KernelName::ExpDecay)]
}

#[test]
fn c8_nystrom_convergence() {
    criterion(8, "Nystrom convergence", Some(Duration::from_secs(60)), |fails| {
        let spec = KernelSpec::named(KernelName::Product);
        let sizes = [16, 32, 64, 128, 256];
        let errs: Vec<f64> = sizes
            .iter()
            .map(|n| {
                let r = spectral_radius(&discretize_kernel(&spec, &build_grid(*n, Scheme::Midpoint).unwrap()).unwrap()).unwrap();
                check(fails, (r - oracle::product_kernel_midpoint(*n)).abs() <= 1e-13, || format!("n={n}: r={r}"));
                (r - 1.0 / 3.0).abs()
            })
            .collect();
        let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
        check(fails, ratios.iter().all(|q| *q >= 3.5), || format!("ratios {ratios:?}"));
        check(fails, errs[4] <= 1e-4, || format!("error at 256 = {:e}", errs[4]));

        let grid = build_grid(64, Scheme::Midpoint).unwrap();
        let mut levinger_curves = 0;
        let mut sum_trials = 0;
        for (ki, spec) in positive_kernels().iter().enumerate() {
            let k = discretize_kernel(spec, &grid).unwrap();
            let ts = bounds::uniform_samples(51);
            for trial in 0..5u64 {
                let mut g = rng(30_000 + 100 * ki as u64 + trial);
                let d = if trial == 0 { vec![1.0; 64] } else { sample_multiplier(&mut g, 64) };
                let c = bounds::levinger_curve(&k, &d, &ts).unwrap();
                let tol = 1e-8 * c.r_base;
                check(
                    fails,
                    c.floor_margin() >= -tol && c.monotone_up_violation >= -tol && c.monotone_down_violation <= tol,
                    || format!("kernel {ki} trial {trial}: Levinger {:e} {:e} {:e}", c.floor_margin(), c.monotone_up_violation, c.monotone_down_violation),
                );
                levinger_curves += 1;
            }
            for trial in 0..20u64 {
                let mut g = rng(40_000 + 100 * ki as u64 + trial);
                let scales = (0..2).map(|_| sample_multiplier(&mut g, 64)).collect();
                let fam = make_family(&k, FamilyKind::Similarity { scales }, None).unwrap();
                let ds: Vec<_> = (0..3).map(|_| sample_multiplier(&mut g, 64)).collect();
                let es: Vec<_> = (0..3).map(|_| sample_multiplier(&mut g, 64)).collect();
                let rep = bounds::sum_bound(&fam, &ds, &es).unwrap();
                check(fails, rep.passes_at(1e-8), || format!("kernel {ki} trial {trial}: {rep:?}"));
                sum_trials += 1;
            }
        }
        format!(
            "errors {:?}, ratios {:?}; {levinger_curves} Levinger curves and {sum_trials} Sum trials on n=64 kernels",
            errs.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>(),
            ratios.iter().map(|q| format!("{q:.3}")).collect::<Vec<_>>()
        )
    });
}

#[test]
fn c9_decreasing_limit() {
    criterion(9, "decreasing limit", None, |fails| {
        let eps = [1.0, 0.1, 0.01, 0.001];
        let mut ops = Vec::new();
        for trial in 0..100u64 {
            let k = random_operator(6_000 + trial, 6, 1.0, 1.0);
            let dl = bounds::decreasing_limit_check(&k, &eps).unwrap();
            let r0 = spectral_radius(&regularizer(&k)).unwrap();
            check(fails, (r0 - 6.0).abs() <= 1e-12, || format!("r(K0) = {r0}"));
            for w in dl.radii.windows(2) {
                check(fails, w[1] <= w[0] + 1e-10, || format!("trial {trial}: not decreasing {:?}", dl.radii));
            }
            let gap = dl.radii[3] - dl.r_base;
            check(fails, gap <= 0.01 * r0 + 1e-8, || format!("trial {trial}: final gap {gap:e}"));
            check(fails, dl.report.pass, || format!("trial {trial}: {:?}", dl.report));
            ops.push(k);
        }
        // weighted operators: random weights and Nystrom discretizations
        for trial in 0..50u64 {
            let mut g = rng(60_000 + trial);
            let w: Vec<f64> = (0..6).map(|_| g.gen_range(0.1..2.0)).collect();
            ops.push(random_operator(7_000 + trial, 6, 0.5, 1.0).with_weights(w).unwrap());
        }
        for scheme in [Scheme::Midpoint, Scheme::GaussLegendre] {
            let grid = build_grid(64, scheme).unwrap();
            for spec in positive_kernels() {
                ops.push(discretize_kernel(&spec, &grid).unwrap());
            }
        }
        let mut worst = 0.0f64;
        for (i, k) in ops.iter().enumerate() {
            let rep = bounds::adjoint_radius_check(k).unwrap();
            let gap = (spectral_radius(&adjoint(k)).unwrap() - spectral_radius(k).unwrap()).abs();
            worst = worst.max(gap);
            check(fails, rep.pass && gap <= 1e-10, || format!("operator {i}: |r(K*) - r(K)| = {gap:e}"));
        }
        format!("100 eps ladders; adjoint check on {} operators, worst gap {worst:e}", ops.len())
    });
}
