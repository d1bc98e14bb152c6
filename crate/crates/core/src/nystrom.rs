//! Nyström discretization of kernel operators on `L^2([0, 1], dx)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linops::{spectral_radius, PositiveOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    Midpoint,
    GaussLegendre,
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(Scheme::Midpoint),
            "gauss-legendre" => Ok(Scheme::GaussLegendre),
            other => Err(Error::domain(format!("unknown quadrature scheme '{other}'"))),
        }
    }
}

/// Nodes and positive weights on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::domain("grid needs equally many nodes and weights, at least one"));
        }
        if nodes.iter().any(|x| !(*x > 0.0 && *x < 1.0)) {
            return Err(Error::domain("grid nodes must lie in the open interval (0, 1)"));
        }
        if nodes.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::domain("grid nodes must be strictly increasing"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::domain("grid weights must be positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("grid weights sum to {total}, expected 1")));
        }
        Ok(QuadratureGrid { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

pub fn build_grid(n: usize, scheme: Scheme) -> Result<QuadratureGrid> {
    if n < 1 {
        return Err(Error::domain("grid size must be at least 1"));
    }
    let (nodes, weights) = match scheme {
        Scheme::Midpoint => {
            let h = 1.0 / n as f64;
            ((0..n).map(|i| (i as f64 + 0.5) * h).collect(), vec![h; n])
        }
        Scheme::GaussLegendre => gauss_legendre_unit(n),
    };
    QuadratureGrid::new(nodes, weights)
}

/// Gauss–Legendre rule mapped from `[-1, 1]` to `[0, 1]`, nodes ascending.
fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        // z is the i-th largest root on [-1, 1]
        nodes[n - 1 - i] = 0.5 * (1.0 + z);
        nodes[i] = 0.5 * (1.0 - z);
        weights[n - 1 - i] = 0.5 * w;
        weights[i] = 0.5 * w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

pub fn integrate(grid: &QuadratureGrid, values: &[f64]) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::domain(format!(
            "expected {} samples, got {}",
            grid.len(),
            values.len()
        )));
    }
    Ok(grid.weights.iter().zip(values).map(|(w, v)| w * v).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelName {
    /// `k = c` (params: `[c]`, default 1).
    Constant,
    /// `k = x y`.
    Product,
    /// `k = exp(-(x - y)^2 / (2 s^2))` (params: `[s]`, default 0.25).
    Gauss,
    /// `k = exp(-a |x - y|)` (params: `[a]`, default 1).
    ExpDecay,
}

/// `k(x, y) = u(x) v(y)` with polynomial factors, constant term first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorPair {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelJson", into = "KernelJson")]
pub enum KernelSpec {
    Named { name: KernelName, params: Vec<f64> },
    Separable(Vec<FactorPair>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<KernelName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    separable: Option<Vec<FactorPair>>,
}

impl TryFrom<KernelJson> for KernelSpec {
    type Error = Error;
    fn try_from(j: KernelJson) -> Result<Self> {
        let spec = match (j.name, j.separable) {
            (Some(name), None) => KernelSpec::Named {
                name,
                params: j.params.unwrap_or_default(),
            },
            (None, Some(pairs)) if j.params.is_none() => KernelSpec::Separable(pairs),
            _ => {
                return Err(Error::domain(
                    "kernel must have exactly one of 'name' (with optional 'params') or 'separable'",
                ))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<KernelSpec> for KernelJson {
    fn from(k: KernelSpec) -> Self {
        match k {
            KernelSpec::Named { name, params } => KernelJson {
                name: Some(name),
                params: (!params.is_empty()).then_some(params),
                separable: None,
            },
            KernelSpec::Separable(p) => KernelJson {
                name: None,
                params: None,
                separable: Some(p),
            },
        }
    }
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

impl KernelSpec {
    pub fn named(name: KernelName) -> Self {
        KernelSpec::Named { name, params: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Named { name, params } => {
                if params.iter().any(|p| !p.is_finite()) {
                    return Err(Error::domain("kernel parameters must be finite"));
                }
                let max = match name {
                    KernelName::Product => 0,
                    _ => 1,
                };
                if params.len() > max {
                    return Err(Error::domain(format!(
                        "kernel {name:?} takes at most {max} parameter(s), got {}",
                        params.len()
                    )));
                }
                if matches!(name, KernelName::Gauss) && params.first().is_some_and(|s| *s <= 0.0) {
                    return Err(Error::domain("gauss kernel width must be positive"));
                }
            }
            KernelSpec::Separable(pairs) => {
                if pairs.is_empty() {
                    return Err(Error::domain("separable kernel needs at least one factor pair"));
                }
                if pairs.iter().any(|p| p.u.iter().chain(&p.v).any(|c| !c.is_finite())) {
                    return Err(Error::domain("polynomial coefficients must be finite"));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            KernelSpec::Named { name, params } => {
                let p0 = params.first().copied();
                match name {
                    KernelName::Constant => p0.unwrap_or(1.0),
                    KernelName::Product => x * y,
                    KernelName::Gauss => {
                        let s = p0.unwrap_or(0.25);
                        (-(x - y).powi(2) / (2.0 * s * s)).exp()
                    }
                    KernelName::ExpDecay => (-p0.unwrap_or(1.0) * (x - y).abs()).exp(),
                }
            }
            KernelSpec::Separable(pairs) => pairs.iter().map(|p| poly(&p.u, x) * poly(&p.v, y)).sum(),
        }
    }

    /// `k'(x, y) = k(y, x)`.
    pub fn transposed(&self) -> KernelSpec {
        match self {
            KernelSpec::Named { .. } => self.clone(),
            KernelSpec::Separable(pairs) => KernelSpec::Separable(
                pairs
                    .iter()
                    .map(|p| FactorPair {
                        u: p.v.clone(),
                        v: p.u.clone(),
                    })
                    .collect(),
            ),
        }
    }

    /// Upper bound on the rank of any discretization.
    pub fn separable_rank(&self) -> Option<usize> {
        match self {
            KernelSpec::Separable(p) => Some(p.len()),
            KernelSpec::Named { name, .. } => match name {
                KernelName::Constant | KernelName::Product => Some(1),
                _ => None,
            },
        }
    }
}

/// `A_ij = k(x_i, x_j) w_j`, carrying the grid weights.
pub fn discretize_kernel(spec: &KernelSpec, grid: &QuadratureGrid) -> Result<PositiveOperator> {
    let n = grid.len();
    let mut entries = Vec::with_capacity(n * n);
    for (i, &x) in grid.nodes.iter().enumerate() {
        for (j, (&y, &w)) in grid.nodes.iter().zip(&grid.weights).enumerate() {
            let k = spec.eval(x, y);
            if !k.is_finite() {
                return Err(Error::domain(format!("kernel is not finite at node pair ({i}, {j})")));
            }
            if k < 0.0 {
                return Err(Error::domain(format!(
                    "kernel is negative at node pair ({i}, {j}) = ({x}, {y}): {k}"
                )));
            }
            entries.push(k * w);
        }
    }
    PositiveOperator::new(n, entries)?.with_weights(grid.weights.clone())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub n: usize,
    pub r: f64,
    /// `|r(n) - r(previous n)|`, absent for the first size.
    pub diff: Option<f64>,
}

pub fn convergence_study(spec: &KernelSpec, scheme: Scheme, sizes: &[usize]) -> Result<Vec<ConvergencePoint>> {
    if sizes.is_empty() {
        return Err(Error::domain("convergence study needs at least one size"));
    }
    if sizes.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::domain("sizes must be strictly ascending"));
    }
    let mut out: Vec<ConvergencePoint> = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let grid = build_grid(n, scheme)?;
        let r = spectral_radius(&discretize_kernel(spec, &grid)?)?;
        let diff = out.last().map(|p| (r - p.r).abs());
        out.push(ConvergencePoint { n, r, diff });
    }
    Ok(out)
}
