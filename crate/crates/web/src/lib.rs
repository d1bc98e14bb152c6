//! WebAssembly bindings for the browser demo. Each export takes and returns a
//! JSON string; the `*_json` functions hold the logic and run natively too.

use serde::{Deserialize, Serialize};
use speclab::bounds::{self, InequalityReport};
use speclab::linops::PositiveOperator;
use speclab::nystrom::{convergence_study, ConvergencePoint, KernelSpec, Scheme};
use wasm_bindgen::prelude::*;

/// Largest matrix the page accepts; keeps a click responsive.
pub const MAX_DIM: usize = 64;
const MAX_SAMPLES: usize = 401;
const MAX_GRID: usize = 1024;

fn parse<'a, T: Deserialize<'a>>(input: &'a str) -> Result<T, String> {
    serde_json::from_str(input).map_err(|e| format!("invalid input: {e}"))
}

fn render<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn operator(rows: &[Vec<f64>]) -> Result<PositiveOperator, String> {
    if rows.len() > MAX_DIM {
        return Err(format!("matrix dimension {} exceeds {MAX_DIM}", rows.len()));
    }
    PositiveOperator::from_rows(rows).map_err(|e| e.to_string())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LevingerInput {
    matrix: Vec<Vec<f64>>,
    d: Option<Vec<f64>>,
    samples: Option<usize>,
}

#[derive(Serialize)]
struct LevingerOutput {
    ts: Vec<f64>,
    phis: Vec<f64>,
    r_base: f64,
    floor_margin: f64,
    reports: Vec<InequalityReport>,
}

/// `{"matrix": [[..]], "d": [..], "samples": 51}` to the sampled curve and its checks.
pub fn levinger_json(input: &str) -> Result<String, String> {
    let inp: LevingerInput = parse(input)?;
    let k = operator(&inp.matrix)?;
    let samples = inp.samples.unwrap_or(bounds::DEFAULT_SAMPLES);
    if !(2..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must lie in 2..={MAX_SAMPLES}"));
    }
    let d = inp.d.unwrap_or_else(|| vec![1.0; k.dim()]);
    let c = bounds::levinger_curve(&k, &d, &bounds::uniform_samples(samples)).map_err(|e| e.to_string())?;
    let reports = vec![c.floor_report(bounds::DEFAULT_TOL), c.monotone_report(bounds::DEFAULT_TOL)];
    render(&LevingerOutput {
        floor_margin: c.floor_margin(),
        ts: c.ts,
        phis: c.phis,
        r_base: c.r_base,
        reports,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainInput {
    matrix: Vec<Vec<f64>>,
    ts: Vec<f64>,
}

#[derive(Serialize)]
struct ChainPoint {
    t: f64,
    norm_a: f64,
    norm_m: f64,
    w_m: f64,
    w_a: f64,
    r_a: f64,
    pass: bool,
}

/// `{"matrix": [[..]], "ts": [..]}` to the numerical-radius chain at each `t`.
pub fn nr_chain_json(input: &str) -> Result<String, String> {
    let inp: ChainInput = parse(input)?;
    let a = operator(&inp.matrix)?;
    if inp.ts.is_empty() || inp.ts.len() > MAX_SAMPLES {
        return Err(format!("give between 1 and {MAX_SAMPLES} values of t"));
    }
    let points = inp
        .ts
        .iter()
        .map(|t| {
            let c = bounds::numerical_radius_chain(&a, *t).map_err(|e| e.to_string())?;
            Ok(ChainPoint {
                t: *t,
                norm_a: c.norm_a,
                norm_m: c.norm_m,
                w_m: c.w_m,
                w_a: c.w_a,
                r_a: c.r_a,
                pass: c.reports.iter().all(|r| r.pass),
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    render(&points)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NystromInput {
    kernel: KernelSpec,
    #[serde(default)]
    scheme: Scheme,
    sizes: Vec<usize>,
}

/// `{"kernel": {...}, "scheme": "midpoint", "sizes": [..]}` to `r(n)` and successive differences.
pub fn nystrom_json(input: &str) -> Result<String, String> {
    let inp: NystromInput = parse(input)?;
    if inp.sizes.iter().any(|n| *n > MAX_GRID) {
        return Err(format!("grid sizes are capped at {MAX_GRID}"));
    }
    let pts: Vec<ConvergencePoint> = convergence_study(&inp.kernel, inp.scheme, &inp.sizes).map_err(|e| e.to_string())?;
    render(&pts)
}

#[wasm_bindgen]
pub fn levinger(input: &str) -> Result<String, JsError> {
    levinger_json(input).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn nr_chain(input: &str) -> Result<String, JsError> {
    nr_chain_json(input).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn nystrom(input: &str) -> Result<String, JsError> {
    nystrom_json(input).map_err(|e| JsError::new(&e))
}
