//! Irreducibility, normalized Perron eigenpairs and operator families that share
//! a Perron product density.

use serde::{Deserialize, Serialize};

use crate::eig;
use crate::error::{Error, Result};
use crate::linops::{self, adjoint, power_series_apply, similarity_scale, PositiveOperator, EIG_TOL};

/// Shared-density tolerance, relative to `max |h|`.
pub const FAMILY_TOL: f64 = 1e-9;

/// Support-graph strong connectivity. A 1x1 operator is irreducible iff its entry is positive.
pub fn is_irreducible(op: &PositiveOperator) -> bool {
    reducing_block(op).is_none()
}

/// A proper non-empty index set `A` with `K_ij = 0` for `i in A`, `j not in A`,
/// or `None` when the operator is irreducible.
pub fn reducing_block(op: &PositiveOperator) -> Option<Vec<usize>> {
    let n = op.dim();
    if n == 1 {
        return (op.get(0, 0) <= 0.0).then(|| vec![0]);
    }
    let reach = |start: usize| -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for (j, &kij) in op.row(i).iter().enumerate() {
                if kij > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    };
    let as_block = |seen: &[bool]| seen.iter().enumerate().filter(|(_, s)| **s).map(|(i, _)| i).collect();
    let from0 = reach(0);
    if from0.iter().any(|s| !s) {
        return Some(as_block(&from0));
    }
    for j in 1..n {
        let from_j = reach(j);
        if !from_j[0] {
            return Some(as_block(&from_j));
        }
    }
    None
}

/// Perron root with right and left eigenvectors, normalized so that
/// `||f||_w = 1` and `<f, g>_w = 1`; `h = f g` is then a probability density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronPair {
    pub r: f64,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
}

impl PerronPair {
    fn from_vectors(op: &PositiveOperator, r: f64, mut f: Vec<f64>, mut g: Vec<f64>) -> Result<Self> {
        let nf = op.norm_of(&f);
        f.iter_mut().for_each(|v| *v /= nf);
        let fg = op.inner(&f, &g);
        if !(fg > 0.0 && fg.is_finite()) {
            return Err(Error::Numerical("left and right Perron vectors are orthogonal".into()));
        }
        g.iter_mut().for_each(|v| *v /= fg);
        let h = f.iter().zip(&g).map(|(a, b)| a * b).collect();
        Ok(PerronPair { r, f, g, h })
    }

    /// Relative residuals `||K f - r f|| / ||f||` and `||K* g - r g|| / ||g||`.
    pub fn residuals(&self, op: &PositiveOperator) -> (f64, f64) {
        let res = |k: &PositiveOperator, v: &[f64]| {
            let kv = k.apply(v);
            let diff: Vec<f64> = kv.iter().zip(v).map(|(a, b)| a - self.r * b).collect();
            op.norm_of(&diff) / op.norm_of(v)
        };
        (res(op, &self.f), res(&adjoint(op), &self.g))
    }

    /// Checks the eigen-residual invariant at `EIG_TOL * max(1, r)`.
    pub fn verify(&self, op: &PositiveOperator) -> Result<()> {
        let (rf, rg) = self.residuals(op);
        let tol = EIG_TOL * self.r.max(1.0);
        if rf > tol || rg > tol {
            return Err(Error::Numerical(format!(
                "Perron pair residuals ({rf:e}, {rg:e}) exceed {tol:e}"
            )));
        }
        if self.f.iter().chain(&self.g).any(|v| !(*v > 0.0)) {
            return Err(Error::Numerical("Perron vectors are not strictly positive".into()));
        }
        Ok(())
    }
}

/// The rank-one regularizer `K0 u = <u, 1>_w 1`, i.e. kernel `u(x) u(y)` with `u = 1`.
pub fn regularizer(like: &PositiveOperator) -> PositiveOperator {
    let n = like.dim();
    let w = like.weight_vec();
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n {
        entries.extend_from_slice(&w);
    }
    let op = PositiveOperator::new(n, entries).expect("weights are positive");
    match like.weights() {
        Some(w) => op.with_weights(w.to_vec()).expect("weights already validated"),
        None => op,
    }
}

/// `K + eps K0`.
pub fn regularize(op: &PositiveOperator, eps: f64) -> Result<PositiveOperator> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("regularization must be positive, got {eps}")));
    }
    op.combine(1.0, &regularizer(op), eps)
}

fn perron_vector(op: &PositiveOperator) -> Result<(f64, Vec<f64>)> {
    let n = op.dim();
    if n == 1 {
        return Ok((op.get(0, 0), vec![1.0]));
    }
    if let Some(p) = eig::perron_power(op.entries(), n, None) {
        return Ok((p.value, p.vector));
    }
    let root = eig::spectral_radius_qr(op.entries(), n)?;
    eig::perron_inverse(op.entries(), n, root)
        .map(|p| (p.value, p.vector))
        .ok_or_else(|| Error::NotConverged {
            iterations: eig::POWER_MAX_ITERS,
            residual: f64::NAN,
            last_iterate: Vec::new(),
        })
}

/// Normalized Perron pair of an irreducible operator, or of `K + eps K0` when a
/// regularization is supplied.
pub fn perron_pair(op: &PositiveOperator, regularization: Option<f64>) -> Result<PerronPair> {
    let regularized;
    let op = match regularization {
        Some(eps) => {
            regularized = regularize(op, eps)?;
            &regularized
        }
        None => {
            if let Some(block) = reducing_block(op) {
                return Err(Error::Reducible { block });
            }
            op
        }
    };
    let (r, f) = perron_vector(op)?;
    if !(r > 0.0) {
        return Err(Error::domain("spectral radius is zero; no Perron pair"));
    }
    let (_, g) = perron_vector(&adjoint(op))?;
    let pair = PerronPair::from_vectors(op, r, f, g)?;
    pair.verify(op)?;
    Ok(pair)
}

/// How the members of a family were produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyKind {
    /// Members `K` and `C_i K C_i^{-1}` for each scale vector `c_i`.
    Similarity { scales: Vec<Vec<f64>> },
    /// Members `K` and `K*`.
    AdjointPair,
    /// Members `p_i(K)` for non-negative coefficient lists `p_i`.
    Series { polys: Vec<Vec<f64>> },
    /// Members given directly; only validated.
    Explicit { members: Vec<PositiveOperator> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorFamily {
    pub members: Vec<PositiveOperator>,
    pub pairs: Vec<PerronPair>,
    pub h: Vec<f64>,
    pub kind: FamilyKind,
}

impl OperatorFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    /// Largest deviation of a member density from the shared `h`, relative to `max h`.
    pub fn density_defect(&self) -> f64 {
        let hmax = self.h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.pairs
            .iter()
            .flat_map(|p| p.h.iter().zip(&self.h).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
            / hmax
    }
}

/// Pair of a member derived from the base pair by the construction's transport
/// rule, used when the member is not irreducible (e.g. `p(K) = I`).
fn derived_pair(member: &PositiveOperator, r: f64, f: Vec<f64>, g: Vec<f64>) -> Result<PerronPair> {
    let pair = PerronPair::from_vectors(member, r, f, g)?;
    pair.verify(member)?;
    Ok(pair)
}

fn member_pair(member: &PositiveOperator, derived: impl FnOnce() -> Result<PerronPair>) -> Result<PerronPair> {
    if is_irreducible(member) {
        perron_pair(member, None)
    } else {
        derived()
    }
}

/// Build a family whose members share the Perron density of `base`.
///
/// With `regularization`, `base` is first replaced by `base + eps K0`.
pub fn make_family(base: &PositiveOperator, kind: FamilyKind, regularization: Option<f64>) -> Result<OperatorFamily> {
    if let FamilyKind::Explicit { members } = &kind {
        return explicit_family(members.clone(), regularization);
    }
    let base = match regularization {
        Some(eps) => regularize(base, eps)?,
        None => base.clone(),
    };
    let bp = perron_pair(&base, None)?;
    let mut members = Vec::new();
    let mut pairs = Vec::new();
    match &kind {
        FamilyKind::Similarity { scales } => {
            members.push(base.clone());
            pairs.push(bp.clone());
            for c in scales {
                let m = similarity_scale(&base, c)?;
                let pair = member_pair(&m, || {
                    let f = bp.f.iter().zip(c).map(|(f, c)| f * c).collect();
                    let g = bp.g.iter().zip(c).map(|(g, c)| g / c).collect();
                    derived_pair(&m, bp.r, f, g)
                })?;
                members.push(m);
                pairs.push(pair);
            }
        }
        FamilyKind::AdjointPair => {
            let star = adjoint(&base);
            let pair = member_pair(&star, || derived_pair(&star, bp.r, bp.g.clone(), bp.f.clone()))?;
            members.push(base.clone());
            pairs.push(bp.clone());
            members.push(star);
            pairs.push(pair);
        }
        FamilyKind::Series { polys } => {
            if polys.is_empty() {
                return Err(Error::domain("series family needs at least one polynomial"));
            }
            for p in polys {
                let m = power_series_apply(&base, p, p.len())?;
                let rp = linops::eval_poly(p, bp.r);
                let pair = member_pair(&m, || derived_pair(&m, rp, bp.f.clone(), bp.g.clone()))?;
                members.push(m);
                pairs.push(pair);
            }
        }
        FamilyKind::Explicit { .. } => unreachable!(),
    }
    finish_family(members, pairs, bp.h, kind)
}

fn explicit_family(members: Vec<PositiveOperator>, regularization: Option<f64>) -> Result<OperatorFamily> {
    let first = members
        .first()
        .ok_or_else(|| Error::domain("explicit family needs at least one member"))?;
    if members.iter().any(|m| !m.same_space(first)) {
        return Err(Error::domain("family members must share dimension and weights"));
    }
    let members = match regularization {
        Some(eps) => members.iter().map(|m| regularize(m, eps)).collect::<Result<Vec<_>>>()?,
        None => members,
    };
    let pairs = members
        .iter()
        .map(|m| perron_pair(m, None))
        .collect::<Result<Vec<_>>>()?;
    let h = pairs[0].h.clone();
    finish_family(members.clone(), pairs, h, FamilyKind::Explicit { members })
}

fn finish_family(members: Vec<PositiveOperator>, pairs: Vec<PerronPair>, h: Vec<f64>, kind: FamilyKind) -> Result<OperatorFamily> {
    let family = OperatorFamily { members, pairs, h, kind };
    let defect = family.density_defect();
    if !(defect <= FAMILY_TOL) {
        return Err(Error::Numerical(format!(
            "family members do not share a Perron density: defect {defect:e} > {FAMILY_TOL:e}"
        )));
    }
    Ok(family)
}

pub fn shared_density(family: &OperatorFamily) -> &[f64] {
    &family.h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nystrom::{build_grid, discretize_kernel, integrate, KernelName, KernelSpec, Scheme};
    use approx::assert_abs_diff_eq;

    fn op(rows: &[&[f64]]) -> PositiveOperator {
        PositiveOperator::from_rows(rows).unwrap()
    }

    fn ratio_close(v: &[f64], want: &[f64]) {
        let s = v[0] / want[0];
        for (a, b) in v.iter().zip(want) {
            assert_abs_diff_eq!(a / s, *b, epsilon = 1e-12);
        }
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&op(&[&[0.0, 1.0], &[1.0, 0.0]])));
        let k = op(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(!is_irreducible(&k));
        let block = reducing_block(&k).unwrap();
        assert_eq!(block, vec![1]);
        assert_eq!(k.get(1, 0), 0.0);
        assert!(!is_irreducible(&PositiveOperator::identity(2)));
        assert!(is_irreducible(&op(&[&[3.0]])));
        assert!(!is_irreducible(&op(&[&[0.0]])));
    }

    #[test]
    fn perron_pair_examples() {
        let p = perron_pair(&op(&[&[0.0, 4.0], &[1.0, 0.0]]), None).unwrap();
        assert_abs_diff_eq!(p.r, 2.0, epsilon = 1e-13);
        ratio_close(&p.f, &[2.0, 1.0]);
        ratio_close(&p.g, &[1.0, 2.0]);
        assert_abs_diff_eq!(p.h[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(p.h[1], 0.5, epsilon = 1e-12);

        let p = perron_pair(&op(&[&[3.5]]), None).unwrap();
        assert_eq!((p.r, p.f[0], p.g[0], p.h[0]), (3.5, 1.0, 1.0, 1.0));

        let p = perron_pair(&op(&[&[0.0, 1.0], &[1.0, 0.0]]), None).unwrap();
        assert_abs_diff_eq!(p.r, 1.0, epsilon = 1e-14);
        for v in p.f.iter().chain(&p.g) {
            assert_abs_diff_eq!(*v, 0.5f64.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn perron_pair_errors() {
        match perron_pair(&op(&[&[1.0, 1.0], &[0.0, 1.0]]), None) {
            Err(Error::Reducible { block }) => assert_eq!(block, vec![1]),
            other => panic!("expected reducible error, got {other:?}"),
        }
        assert!(perron_pair(&op(&[&[0.0]]), None).is_err());
        // regularization makes a reducible operator admissible
        let p = perron_pair(&op(&[&[1.0, 1.0], &[0.0, 1.0]]), Some(1e-3)).unwrap();
        assert!(p.r > 1.0);
    }

    #[test]
    fn weighted_pair_normalization() {
        let g = build_grid(6, Scheme::GaussLegendre).unwrap();
        let k = discretize_kernel(&KernelSpec::named(KernelName::ExpDecay), &g).unwrap();
        let p = perron_pair(&k, None).unwrap();
        assert_abs_diff_eq!(k.norm_of(&p.f), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(integrate(&g, &p.h).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn family_examples() {
        let x = op(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let fam = make_family(&x, FamilyKind::Similarity { scales: vec![vec![2.0, 1.0]] }, None).unwrap();
        assert_eq!(fam.members[1], op(&[&[0.0, 2.0], &[0.5, 0.0]]));
        for h in shared_density(&fam) {
            assert_abs_diff_eq!(*h, 0.5, epsilon = 1e-12);
        }

        let fam = make_family(&op(&[&[0.0, 4.0], &[1.0, 0.0]]), FamilyKind::AdjointPair, None).unwrap();
        for p in &fam.pairs {
            assert_abs_diff_eq!(p.r, 2.0, epsilon = 1e-13);
            assert_abs_diff_eq!(p.h[0], 0.5, epsilon = 1e-12);
        }

        let fam = make_family(
            &op(&[&[2.0]]),
            FamilyKind::Series { polys: vec![vec![1.0], vec![0.0, 1.0]] },
            None,
        )
        .unwrap();
        assert_eq!(fam.members, vec![op(&[&[1.0]]), op(&[&[2.0]])]);
        assert_eq!(fam.h, vec![1.0]);
    }

    #[test]
    fn series_family_with_identity_member() {
        let k = op(&[&[1.0, 2.0, 0.5], &[0.3, 0.0, 1.0], &[1.0, 1.0, 1.0]]);
        let fam = make_family(&k, FamilyKind::Series { polys: vec![vec![1.0], vec![0.5, 1.0, 0.2]] }, None).unwrap();
        assert_eq!(fam.members[0], PositiveOperator::identity(3));
        assert_abs_diff_eq!(fam.pairs[0].r, 1.0, epsilon = 0.0);
        assert!(fam.density_defect() <= FAMILY_TOL);
    }

    #[test]
    fn constant_kernel_density_is_one() {
        let g = build_grid(4, Scheme::Midpoint).unwrap();
        let k = discretize_kernel(&KernelSpec::named(KernelName::Constant), &g).unwrap();
        let fam = make_family(&k, FamilyKind::Similarity { scales: vec![vec![1.0, 2.0, 3.0, 4.0]] }, None).unwrap();
        for h in shared_density(&fam) {
            assert_abs_diff_eq!(*h, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn explicit_family_validates() {
        let a = op(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let b = op(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(make_family(&a, FamilyKind::Explicit { members: vec![a.clone(), b] }, None).is_ok());
        let c = op(&[&[2.0, 1.0], &[1.0, 0.0]]);
        let err = make_family(&a, FamilyKind::Explicit { members: vec![a.clone(), c] }, None).unwrap_err();
        assert!(matches!(err, Error::Numerical(_)));
    }

    #[test]
    fn regularization_decreases_to_radius() {
        let k = op(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let rs: Vec<f64> = [1.0, 0.1, 0.01]
            .iter()
            .map(|e| linops::spectral_radius(&regularize(&k, *e).unwrap()).unwrap())
            .collect();
        assert_abs_diff_eq!(rs[0], 1.0 + 2f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(rs[1], 0.1 + 0.11f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(rs[2], 0.01 + 0.0101f64.sqrt(), epsilon = 1e-12);
    }
}
