//! Dense eigenvalue kernels.
//!
//! Two routes to the spectral radius of a non-negative matrix:
//!
//! * shifted power iteration on `A + sigma I`, stopped by the Collatz–Wielandt
//!   bracket `min_i (Av)_i / v_i <= r(A) <= max_i (Av)_i / v_i`, which is valid for
//!   every strictly positive `v` and every entrywise non-negative `A`;
//! * the full spectrum from balancing, Hessenberg reduction and the Francis
//!   double-shift QR iteration, used when the bracket does not close.
//!
//! Matrices are dense, row-major, `n * n` slices.

use crate::error::{Error, Result};

/// Iteration cap for the shifted power iteration.
pub const POWER_MAX_ITERS: usize = 10_000;

/// Relative width of the Collatz–Wielandt bracket accepted as converged.
pub const BRACKET_REL_TOL: f64 = 1e-13;

/// Maximum QR sweeps spent on a single eigenvalue before giving up.
const QR_MAX_ITERS: usize = 60;

/// A complex eigenvalue as `(re, im)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Outcome of a power iteration that closed the Collatz–Wielandt bracket.
#[derive(Debug, Clone)]
pub struct PowerResult {
    pub value: f64,
    /// Strictly positive iterate, scaled to unit max-norm.
    pub vector: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

pub(crate) fn matvec(a: &[f64], n: usize, x: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        let row = &a[i * n..(i + 1) * n];
        *o = row.iter().zip(x).map(|(aij, xj)| aij * xj).sum();
    }
}

fn collatz_bounds(ax: &[f64], x: &[f64]) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for (axi, xi) in ax.iter().zip(x) {
        if *xi <= 0.0 || !xi.is_finite() {
            return None;
        }
        let q = axi / xi;
        lo = lo.min(q);
        hi = hi.max(q);
    }
    Some((lo, hi))
}

/// Shifted power iteration for a non-negative matrix.
///
/// Returns `None` when the bracket fails to close (reducible or badly separated
/// peripheral spectrum); callers then fall back to [`eigenvalues`].
pub fn perron_power(a: &[f64], n: usize, start: Option<&[f64]>) -> Option<PowerResult> {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return None;
    }
    let sigma = 1.0 + (0..n).map(|i| a[i * n + i]).fold(0.0f64, f64::max);
    let mut x: Vec<f64> = match start {
        Some(s) if s.iter().all(|v| *v > 0.0 && v.is_finite()) => s.to_vec(),
        _ => vec![1.0; n],
    };
    let mut ax = vec![0.0; n];
    let mut best_width = f64::INFINITY;
    let mut stalled = 0usize;
    let mut last = (0.0, f64::INFINITY);

    for it in 0..POWER_MAX_ITERS {
        matvec(a, n, &x, &mut ax);
        let (lo, hi) = collatz_bounds(&ax, &x)?;
        last = (lo, hi);
        let width = hi - lo;
        if width <= BRACKET_REL_TOL * hi || hi == 0.0 {
            return Some(PowerResult {
                value: 0.5 * (lo + hi),
                vector: x,
                lower: lo,
                upper: hi,
                iterations: it,
            });
        }
        if width < 0.99 * best_width {
            best_width = width;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled > 500 {
                break;
            }
        }
        // x <- (A + sigma I) x, rescaled to unit max-norm
        let mut scale = 0.0f64;
        for (xi, axi) in x.iter_mut().zip(&ax) {
            *xi = axi + sigma * *xi;
            scale = scale.max(*xi);
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return None;
        }
        x.iter_mut().for_each(|v| *v /= scale);
    }
    let (lo, hi) = last;
    // Rounding can stall the bracket just short of the target; a bracket that is
    // still tight is a certified answer.
    if hi - lo <= 1e-10 * hi {
        return Some(PowerResult {
            value: 0.5 * (lo + hi),
            vector: x,
            lower: lo,
            upper: hi,
            iterations: POWER_MAX_ITERS,
        });
    }
    None
}

/// Inverse iteration `x <- (mu I - A)^{-1} x` with `mu` just above the Perron root.
///
/// For non-negative `A` and `mu > r(A)` the resolvent is entrywise non-negative,
/// so the iterate stays in the positive cone and the bracket remains valid.
pub fn perron_inverse(a: &[f64], n: usize, root: f64) -> Option<PowerResult> {
    let mu = root * (1.0 + 1e-9) + 1e-12;
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = -a[i * n + j];
        }
        m[i * n + i] += mu;
    }
    let lu = Lu::factor(&m, n).ok()?;
    let mut x = vec![1.0; n];
    let mut ax = vec![0.0; n];
    for it in 0..200 {
        let mut y = lu.solve(&x);
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(scale > 0.0) || !scale.is_finite() {
            return None;
        }
        y.iter_mut().for_each(|v| *v = (*v / scale).max(0.0));
        x = y;
        matvec(a, n, &x, &mut ax);
        if let Some((lo, hi)) = collatz_bounds(&ax, &x) {
            if hi - lo <= BRACKET_REL_TOL * hi.max(f64::MIN_POSITIVE) {
                return Some(PowerResult {
                    value: 0.5 * (lo + hi),
                    vector: x,
                    lower: lo,
                    upper: hi,
                    iterations: it,
                });
            }
        }
    }
    None
}

/// LU factorization with partial pivoting.
pub(crate) struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    pub(crate) fn factor(a: &[f64], n: usize) -> Result<Self> {
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= f64::EPSILON * scale * 1e-3 {
                return Err(Error::Numerical(format!("singular matrix at pivot {k}")));
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pkk = lu[k * n + k];
            for i in k + 1..n {
                let l = lu[i * n + k] / pkk;
                lu[i * n + k] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= l * lu[k * n + j];
                    }
                }
            }
        }
        Ok(Lu { n, lu, perm })
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }
}

/// All eigenvalues of a real square matrix.
pub fn eigenvalues(a: &[f64], n: usize) -> Result<Vec<Eigenvalue>> {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    // 1-based working copy keeps the index arithmetic of the classical
    // EISPACK formulation readable.
    let mut h = Mat1::from_row_major(a, n);
    balance(&mut h);
    to_hessenberg(&mut h);
    hqr(&mut h)
}

/// Spectral radius from the full spectrum.
pub fn spectral_radius_qr(a: &[f64], n: usize) -> Result<f64> {
    Ok(eigenvalues(a, n)?
        .iter()
        .map(Eigenvalue::modulus)
        .fold(0.0, f64::max))
}

struct Mat1 {
    n: usize,
    data: Vec<f64>,
}

impl Mat1 {
    fn from_row_major(a: &[f64], n: usize) -> Self {
        let mut data = vec![0.0; (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                data[(i + 1) * (n + 1) + j + 1] = a[i * n + j];
            }
        }
        Mat1 { n, data }
    }
}

impl std::ops::Index<(usize, usize)> for Mat1 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * (self.n + 1) + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat1 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * (self.n + 1) + j]
    }
}

fn balance(a: &mut Mat1) {
    const RADIX: f64 = 2.0;
    let n = a.n;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 1..=n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        a[(i, j)] *= g;
                    }
                    for j in 1..=n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
    }
}

/// Reduction to upper Hessenberg form by stabilized elementary similarity transforms.
fn to_hessenberg(a: &mut Mat1) {
    let n = a.n;
    for m in 2..n {
        let mut x = 0.0f64;
        let mut i = m;
        for j in m..=n {
            if a[(j, m - 1)].abs() > x.abs() {
                x = a[(j, m - 1)];
                i = j;
            }
        }
        if i != m {
            for j in m - 1..=n {
                let t = a[(i, j)];
                a[(i, j)] = a[(m, j)];
                a[(m, j)] = t;
            }
            for j in 1..=n {
                let t = a[(j, i)];
                a[(j, i)] = a[(j, m)];
                a[(j, m)] = t;
            }
        }
        if x != 0.0 {
            for i in m + 1..=n {
                let mut y = a[(i, m - 1)];
                if y != 0.0 {
                    y /= x;
                    a[(i, m - 1)] = y;
                    for j in m..=n {
                        a[(i, j)] -= y * a[(m, j)];
                    }
                    for j in 1..=n {
                        a[(j, m)] += y * a[(j, i)];
                    }
                }
            }
        }
    }
    for i in 3..=n {
        for j in 1..i - 1 {
            a[(i, j)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix.
fn hqr(a: &mut Mat1) -> Result<Vec<Eigenvalue>> {
    let n = a.n;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[(i, j)].abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    while nn >= 1 {
        let mut its = 0;
        let mut l;
        loop {
            l = nn;
            while l >= 2 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() + s == s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nn, nn)];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
            } else {
                let mut y = a[(nn - 1, nn - 1)];
                let mut w = a[(nn, nn - 1)] * a[(nn - 1, nn)];
                if l == nn - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + z.copysign(p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != 0.0 {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if its == QR_MAX_ITERS {
                        return Err(Error::NotConverged {
                            iterations: its,
                            residual: a[(nn, nn - 1)].abs(),
                            last_iterate: wr[nn + 1..].to_vec(),
                        });
                    }
                    if its == 10 || its == 20 || its == 40 {
                        // exceptional shift
                        t += x;
                        for i in 1..=nn {
                            a[(i, i)] -= x;
                        }
                        let s = a[(nn, nn - 1)].abs() + a[(nn - 1, nn - 2)].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    let mut z;
                    loop {
                        z = a[(m, m)];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / a[(m + 1, m)] + a[(m, m + 1)];
                        q = a[(m + 1, m + 1)] - z - r - s;
                        r = a[(m + 2, m + 1)];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m + 2..=nn {
                        a[(i, i - 2)] = 0.0;
                        if i != m + 2 {
                            a[(i, i - 3)] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = a[(k, k - 1)];
                            q = a[(k + 1, k - 1)];
                            r = 0.0;
                            if k != nn - 1 {
                                r = a[(k + 2, k - 1)];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = (p * p + q * q + r * r).sqrt().copysign(p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[(k, k - 1)] = -a[(k, k - 1)];
                                }
                            } else {
                                a[(k, k - 1)] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = a[(k, j)] + q * a[(k + 1, j)];
                                if k != nn - 1 {
                                    p += r * a[(k + 2, j)];
                                    a[(k + 2, j)] -= p * z;
                                }
                                a[(k + 1, j)] -= p * y;
                                a[(k, j)] -= p * x;
                            }
                            let mmin = nn.min(k + 3);
                            for i in l..=mmin {
                                p = x * a[(i, k)] + y * a[(i, k + 1)];
                                if k != nn - 1 {
                                    p += z * a[(i, k + 2)];
                                    a[(i, k + 2)] -= p * r;
                                }
                                a[(i, k + 1)] -= p * q;
                                a[(i, k)] -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 2 || l + 1 >= nn {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Eigenvalue { re: wr[i], im: wi[i] }).collect())
}
