//! Dense non-negative operators on a weighted finite measure space.
//!
//! A [`PositiveOperator`] acts on point samples `u` by `(Ku)_i = sum_j K_ij u_j`.
//! Optional quadrature weights `w` define the inner product
//! `<u, v> = sum_i w_i u_i v_i`; the adjoint is taken with respect to it.

use serde::{Deserialize, Serialize};

use crate::eig;
use crate::error::{Error, Result};

/// Residual tolerance for eigen-computations, relative to the operator scale.
pub const EIG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixLiteral", into = "MatrixLiteral")]
pub struct PositiveOperator {
    dim: usize,
    entries: Vec<f64>,
    weights: Option<Vec<f64>>,
}

/// JSON form: `{"matrix": [[...], ...], "weights": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixLiteral {
    pub matrix: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl TryFrom<MatrixLiteral> for PositiveOperator {
    type Error = Error;
    fn try_from(lit: MatrixLiteral) -> Result<Self> {
        let op = PositiveOperator::from_rows(&lit.matrix)?;
        match lit.weights {
            Some(w) => op.with_weights(w),
            None => Ok(op),
        }
    }
}

impl From<PositiveOperator> for MatrixLiteral {
    fn from(op: PositiveOperator) -> Self {
        MatrixLiteral {
            matrix: op.rows(),
            weights: op.weights,
        }
    }
}

fn check_entries(entries: &[f64]) -> Result<()> {
    for (k, v) in entries.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::domain(format!("entry #{k} is not finite")));
        }
        if *v < 0.0 {
            return Err(Error::domain(format!("entry #{k} is negative ({v})")));
        }
    }
    Ok(())
}

impl PositiveOperator {
    /// Build from a row-major buffer.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        if entries.len() != dim * dim {
            return Err(Error::domain(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        check_entries(&entries)?;
        Ok(PositiveOperator {
            dim,
            entries,
            weights: None,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::domain(format!(
                    "row {i} has length {}, expected {dim} (matrix must be square)",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Self::new(dim, entries)
    }

    /// Attach quadrature weights (strictly positive, one per index).
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.dim {
            return Err(Error::domain(format!(
                "weights have length {}, expected {}",
                weights.len(),
                self.dim
            )));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::domain(format!("weight #{i} must be positive, got {w}")));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn zeros(dim: usize) -> Self {
        PositiveOperator {
            dim,
            entries: vec![0.0; dim * dim],
            weights: None,
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.entries[i * dim + i] = 1.0;
        }
        op
    }

    /// Internal constructor for results that are non-negative by construction.
    /// Rounding residue below `-1e-12 * max|entry|` is an error, smaller is clipped.
    pub(crate) fn from_computed(dim: usize, mut entries: Vec<f64>, weights: Option<Vec<f64>>) -> Result<Self> {
        let scale = entries.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for v in entries.iter_mut() {
            if !v.is_finite() {
                return Err(Error::Numerical("non-finite entry in computed operator".into()));
            }
            if *v < 0.0 {
                if *v < -1e-12 * scale {
                    return Err(Error::Numerical(format!(
                        "computed operator has a negative entry {v:e} (scale {scale:e})"
                    )));
                }
                *v = 0.0;
            }
        }
        Ok(PositiveOperator { dim, entries, weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Weight of index `i` (1 under the counting measure).
    pub fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    /// Weights as an owned vector, ones when absent.
    pub fn weight_vec(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.weight(i)).collect()
    }

    pub fn same_space(&self, other: &PositiveOperator) -> bool {
        self.dim == other.dim && self.weight_vec() == other.weight_vec()
    }

    fn require_same_space(&self, other: &PositiveOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::domain(format!(
                "dimension mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        if !self.same_space(other) {
            return Err(Error::domain("operators carry different weights"));
        }
        Ok(())
    }

    fn require_len(&self, v: &[f64], what: &str) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::domain(format!(
                "{what} has length {}, expected {}",
                v.len(),
                self.dim
            )));
        }
        Ok(())
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.dim, "vector length must match dimension");
        let mut out = vec![0.0; self.dim];
        eig::matvec(&self.entries, self.dim, u, &mut out);
        out
    }

    /// Weighted inner product `sum_i w_i u_i v_i`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        u.iter()
            .zip(v)
            .enumerate()
            .map(|(i, (a, b))| self.weight(i) * a * b)
            .sum()
    }

    pub fn norm_of(&self, u: &[f64]) -> f64 {
        self.inner(u, u).sqrt()
    }

    /// Operator composition `self * other`.
    pub fn compose(&self, other: &PositiveOperator) -> Result<PositiveOperator> {
        self.require_same_space(other)?;
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.entries[k * n..(k + 1) * n];
                for (o, b) in out[i * n..(i + 1) * n].iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(PositiveOperator {
            dim: n,
            entries: out,
            weights: self.weights.clone(),
        })
    }

    pub fn add(&self, other: &PositiveOperator) -> Result<PositiveOperator> {
        self.combine(1.0, other, 1.0)
    }

    /// `a * self + b * other` for non-negative `a`, `b`.
    pub fn combine(&self, a: f64, other: &PositiveOperator, b: f64) -> Result<PositiveOperator> {
        self.require_same_space(other)?;
        if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::domain("combination coefficients must be non-negative"));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(PositiveOperator {
            dim: self.dim,
            entries,
            weights: self.weights.clone(),
        })
    }

    pub fn scale(&self, c: f64) -> Result<PositiveOperator> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::domain(format!("scale factor must be non-negative, got {c}")));
        }
        Ok(PositiveOperator {
            dim: self.dim,
            entries: self.entries.iter().map(|v| c * v).collect(),
            weights: self.weights.clone(),
        })
    }

    /// Identity on the same weighted space.
    pub fn identity_like(&self) -> PositiveOperator {
        let mut id = Self::identity(self.dim);
        id.weights = self.weights.clone();
        id
    }

    pub fn zeros_like(&self) -> PositiveOperator {
        let mut z = Self::zeros(self.dim);
        z.weights = self.weights.clone();
        z
    }

    /// Sum of a non-empty list of operators on a common space.
    pub fn sum<'a, I: IntoIterator<Item = &'a PositiveOperator>>(ops: I) -> Result<PositiveOperator> {
        let mut it = ops.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::domain("cannot sum an empty operator list"))?;
        it.try_fold(first.clone(), |acc, op| acc.add(op))
    }

    /// Largest entry, used as a scale for tolerances.
    pub fn max_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(*v))
    }

    /// Entrywise `self >= other`.
    pub fn dominates(&self, other: &PositiveOperator) -> bool {
        self.dim == other.dim && self.entries.iter().zip(&other.entries).all(|(a, b)| a >= b)
    }
}

/// Maximum eigenvalue modulus. For non-negative operators this is the Perron root.
///
/// Shifted power iteration on `K + sigma I` with `sigma = 1 + max diag`, stopped when
/// the Collatz–Wielandt bracket is tight; otherwise the full Hessenberg-QR spectrum.
pub fn spectral_radius(op: &PositiveOperator) -> Result<f64> {
    let n = op.dim;
    if n == 1 {
        return Ok(op.entries[0]);
    }
    if let Some(p) = eig::perron_power(&op.entries, n, None) {
        return Ok(p.value);
    }
    eig::spectral_radius_qr(&op.entries, n)
}

/// Largest singular value in the weighted inner product, `sqrt(r(K* K))`.
pub fn operator_norm(op: &PositiveOperator) -> Result<f64> {
    let gram = adjoint(op).compose(op)?;
    Ok(spectral_radius(&gram)?.sqrt())
}

/// Numerical radius of a non-negative operator: the top eigenvalue of the
/// weighted-symmetric part `(K + K*) / 2`.
///
/// The symmetric part is itself non-negative and self-adjoint, so its top
/// eigenvalue is its spectral radius.
pub fn numerical_radius(op: &PositiveOperator) -> Result<f64> {
    spectral_radius(&symmetric_part(op))
}

pub fn symmetric_part(op: &PositiveOperator) -> PositiveOperator {
    let adj = adjoint(op);
    op.combine(0.5, &adj, 0.5).expect("adjoint shares the weighted space")
}

/// Weighted adjoint: `K*_ij = (w_j / w_i) K_ji`.
pub fn adjoint(op: &PositiveOperator) -> PositiveOperator {
    let n = op.dim;
    let mut entries = vec![0.0; n * n];
    match &op.weights {
        None => {
            for i in 0..n {
                for j in 0..n {
                    entries[i * n + j] = op.entries[j * n + i];
                }
            }
        }
        Some(w) => {
            for i in 0..n {
                for j in 0..n {
                    entries[i * n + j] = op.entries[j * n + i] * (w[j] / w[i]);
                }
            }
        }
    }
    PositiveOperator {
        dim: n,
        entries,
        weights: op.weights.clone(),
    }
}

/// `D K D^{-1}` for a strictly positive multiplier `d`.
pub fn similarity_scale(op: &PositiveOperator, d: &[f64]) -> Result<PositiveOperator> {
    op.require_len(d, "similarity vector")?;
    if let Some((i, v)) = d.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::domain(format!(
            "similarity vector must be strictly positive; component {i} is {v}"
        )));
    }
    let n = op.dim;
    let mut entries = op.entries.clone();
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] *= d[i] / d[j];
        }
    }
    Ok(PositiveOperator {
        dim: n,
        entries,
        weights: op.weights.clone(),
    })
}

/// `D K E` for non-negative multipliers `d`, `e`.
pub fn weighted_conjugate(op: &PositiveOperator, d: &[f64], e: &[f64]) -> Result<PositiveOperator> {
    op.require_len(d, "left multiplier")?;
    op.require_len(e, "right multiplier")?;
    for (name, v) in [("left", d), ("right", e)] {
        if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::domain(format!("{name} multiplier must be non-negative and finite")));
        }
    }
    let n = op.dim;
    let mut entries = op.entries.clone();
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] *= d[i] * e[j];
        }
    }
    Ok(PositiveOperator {
        dim: n,
        entries,
        weights: op.weights.clone(),
    })
}

/// `(s I - K)^{-1}` by an LU solve, for `s > r(K)`.
pub fn resolvent(op: &PositiveOperator, s: f64) -> Result<PositiveOperator> {
    let r = spectral_radius(op)?;
    resolvent_with_radius(op, s, r)
}

/// As [`resolvent`] when `r(K)` is already known.
pub fn resolvent_with_radius(op: &PositiveOperator, s: f64, r: f64) -> Result<PositiveOperator> {
    if !(s.is_finite() && s > r) {
        return Err(Error::domain(format!(
            "resolvent requires s > r(K); got s = {s}, r(K) = {r}"
        )));
    }
    let n = op.dim;
    let mut m: Vec<f64> = op.entries.iter().map(|v| -v).collect();
    for i in 0..n {
        m[i * n + i] += s;
    }
    let lu = eig::Lu::factor(&m, n)?;
    let mut inv = vec![0.0; n * n];
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[j] = 1.0;
        let col = lu.solve(&e);
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    PositiveOperator::from_computed(n, inv, op.weights.clone())
}

/// `sum_{k <= truncation} a_k K^k` for non-negative coefficients (Horner form).
pub fn power_series_apply(op: &PositiveOperator, coeffs: &[f64], truncation: usize) -> Result<PositiveOperator> {
    check_coefficients(coeffs)?;
    let terms = &coeffs[..coeffs.len().min(truncation.saturating_add(1))];
    let mut acc = op.zeros_like();
    for &a in terms.iter().rev() {
        acc = acc.compose(op)?;
        for i in 0..op.dim {
            acc.entries[i * op.dim + i] += a;
        }
    }
    Ok(acc)
}

pub fn check_coefficients(coeffs: &[f64]) -> Result<()> {
    if let Some((k, a)) = coeffs.iter().enumerate().find(|(_, a)| !(a.is_finite() && **a >= 0.0)) {
        return Err(Error::domain(format!(
            "power series coefficient a_{k} must be non-negative, got {a}"
        )));
    }
    Ok(())
}

/// Scalar polynomial `sum a_k x^k`.
pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// The off-diagonal block operator `[[0, A], [B, 0]]` on the doubled space.
pub fn block_pair(a: &PositiveOperator, b: &PositiveOperator) -> Result<PositiveOperator> {
    a.require_same_space(b)?;
    let n = a.dim;
    let m = 2 * n;
    let mut entries = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            entries[i * m + n + j] = a.entries[i * n + j];
            entries[(n + i) * m + j] = b.entries[i * n + j];
        }
    }
    let weights = a.weights.as_ref().map(|w| w.iter().chain(w).copied().collect());
    Ok(PositiveOperator {
        dim: m,
        entries,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn op(rows: &[&[f64]]) -> PositiveOperator {
        PositiveOperator::from_rows(rows).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PositiveOperator::from_rows(&[[1.0, -1.0], [0.0, 0.0]]).is_err());
        assert!(PositiveOperator::from_rows(&[[1.0, f64::NAN], [0.0, 0.0]]).is_err());
        assert!(PositiveOperator::from_rows(&[vec![1.0, 0.0], vec![0.0]]).is_err());
        let k = op(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert!(k.clone().with_weights(vec![1.0]).is_err());
        assert!(k.with_weights(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn spectral_radius_examples() {
        assert_abs_diff_eq!(spectral_radius(&op(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap(), 1.0, epsilon = 1e-14);
        assert_eq!(spectral_radius(&op(&[&[0.0, 1.0], &[0.0, 0.0]])).unwrap(), 0.0);
        assert_abs_diff_eq!(
            spectral_radius(&op(&[&[1.0, 2.0], &[1.0, 1.0]])).unwrap(),
            1.0 + 2f64.sqrt(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn operator_norm_examples() {
        assert_abs_diff_eq!(operator_norm(&op(&[&[0.0, 2.0], &[0.0, 0.0]])).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(operator_norm(&PositiveOperator::identity(3)).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(operator_norm(&op(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn numerical_radius_examples() {
        assert_abs_diff_eq!(numerical_radius(&op(&[&[0.0, 1.0], &[0.0, 0.0]])).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(numerical_radius(&PositiveOperator::identity(2)).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(numerical_radius(&op(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn adjoint_examples() {
        let k = op(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert_eq!(adjoint(&k), op(&[&[0.0, 0.0], &[2.0, 0.0]]));
        let s = op(&[&[1.0, 3.0], &[3.0, 5.0]]);
        assert_eq!(adjoint(&s), s);
        let w = op(&[&[1.0, 2.0, 0.5], &[0.0, 3.0, 1.0], &[4.0, 0.25, 0.0]])
            .with_weights(vec![0.2, 0.3, 0.5])
            .unwrap();
        let a = adjoint(&w);
        let u = [0.3, -1.2, 2.5];
        let v = [1.1, 0.4, -0.7];
        assert_abs_diff_eq!(w.inner(&w.apply(&u), &v), w.inner(&u, &a.apply(&v)), epsilon = 1e-12);
    }

    #[test]
    fn similarity_and_conjugate_examples() {
        let x = op(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(similarity_scale(&x, &[4.0, 1.0]).unwrap(), op(&[&[0.0, 4.0], &[0.25, 0.0]]));
        assert_eq!(similarity_scale(&x, &[1.0, 1.0]).unwrap(), x);
        assert!(similarity_scale(&x, &[1.0, 0.0]).is_err());
        assert!(similarity_scale(&x, &[1.0, -2.0]).is_err());

        assert_eq!(weighted_conjugate(&x, &[1.0, 1.0], &[1.0, 1.0]).unwrap(), x);
        assert_eq!(
            weighted_conjugate(&x, &[4.0, 1.0], &[1.0, 1.0]).unwrap(),
            op(&[&[0.0, 4.0], &[1.0, 0.0]])
        );
        let z = weighted_conjugate(&op(&[&[1.0, 2.0], &[3.0, 4.0]]), &[0.0, 1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(z.row(0), &[0.0, 0.0]);
    }

    #[test]
    fn resolvent_examples() {
        let x = op(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let r = resolvent(&x, 2.0).unwrap();
        let want = [2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0];
        for (g, w) in r.entries().iter().zip(want) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(spectral_radius(&r).unwrap(), 1.0, epsilon = 1e-13);
        assert_eq!(resolvent(&PositiveOperator::zeros(2), 1.0).unwrap(), PositiveOperator::identity(2));
        let err = resolvent(&x, 1.0).unwrap_err().to_string();
        assert!(err.contains("s = 1") && err.contains("r(K) = 1"), "{err}");
    }

    #[test]
    fn power_series_examples() {
        let k = op(&[&[0.0, 2.0], &[2.0, 0.0]]);
        assert_eq!(power_series_apply(&k, &[1.0], 0).unwrap(), PositiveOperator::identity(2));
        let sq = power_series_apply(&k, &[0.0, 0.0, 1.0], 2).unwrap();
        assert_eq!(sq, op(&[&[4.0, 0.0], &[0.0, 4.0]]));
        assert_abs_diff_eq!(spectral_radius(&sq).unwrap(), eval_poly(&[0.0, 0.0, 1.0], 2.0), epsilon = 1e-14);
        assert_eq!(power_series_apply(&k, &[0.0, 1.0], 1).unwrap(), k);
        assert!(power_series_apply(&k, &[1.0, -0.5], 1).is_err());
        // truncation drops higher terms
        assert_eq!(power_series_apply(&k, &[1.0, 0.0, 1.0], 1).unwrap(), PositiveOperator::identity(2));
    }

    #[test]
    fn block_pair_examples() {
        let a = op(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let b = op(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let t = block_pair(&a, &b).unwrap();
        assert_eq!(t.dim(), 4);
        assert_eq!(t.get(0, 3), 1.0);
        assert_eq!(t.get(3, 0), 1.0);
        assert_abs_diff_eq!(spectral_radius(&t).unwrap(), 1.0, epsilon = 1e-12);
        let z = block_pair(&PositiveOperator::zeros(2), &PositiveOperator::zeros(2)).unwrap();
        assert_eq!(spectral_radius(&z).unwrap(), 0.0);
        assert!(block_pair(&a, &PositiveOperator::zeros(3)).is_err());
        let aw = a.clone().with_weights(vec![0.5, 0.5]).unwrap();
        assert!(block_pair(&aw, &b).is_err());
    }

    #[test]
    fn json_literal_roundtrip() {
        let k: PositiveOperator = serde_json::from_str(r#"{"matrix": [[0, 1], [2, 0]], "weights": [0.5, 0.5]}"#).unwrap();
        assert_eq!(k.weights(), Some(&[0.5, 0.5][..]));
        let back: PositiveOperator = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
        assert_eq!(back, k);
        assert!(serde_json::from_str::<PositiveOperator>(r#"{"matrix": [[0, -1], [2, 0]]}"#).is_err());
    }
}
