//! Sturm-sequence bisection for single eigenvalues of symmetric tridiagonal
//! matrices, inverse iteration for the matching eigenvectors, and Richardson
//! extrapolation of second-order grid sequences.

use crate::error::{KuoError, Result};
use crate::grid::{Grid1D, TridiagOperator};

/// Absolute bisection tolerance used throughout the eigensolver layer.
pub const BISECTION_TOL: f64 = 1e-12;
/// Relative residual `‖(A-λI)v‖/‖A‖` accepted from inverse iteration.
pub const RESIDUAL_TOL: f64 = 1e-10;
const MAX_INVERSE_ITERATIONS: usize = 50;

/// An eigenvalue estimate together with its nodal eigenfunction.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    /// 1-based index in ascending order.
    pub index: usize,
    pub value: f64,
    /// Nodal values on `grid`, unit discrete L² norm, positive at the first
    /// extremum.
    pub vector: Vec<f64>,
    pub grid: Grid1D,
    /// Discrete eigenvalue on `grid` (before any extrapolation).
    pub discrete_value: f64,
    pub residual: f64,
    pub extrapolated: bool,
    pub error_estimate: f64,
}

impl EigenPair {
    /// Number of sign changes of the eigenfunction across interior nodes.
    pub fn sign_changes(&self) -> usize {
        sign_changes(&self.vector)
    }
}

pub fn sign_changes(v: &[f64]) -> usize {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let significant: Vec<f64> = v
        .iter()
        .copied()
        .filter(|x| x.abs() > 1e-10 * scale)
        .collect();
    significant
        .windows(2)
        .filter(|w| (w[0] > 0.0) != (w[1] > 0.0))
        .count()
}

/// Number of eigenvalues strictly below `x` (negative inertia of `A - xI`).
pub fn sturm_count(op: &TridiagOperator, x: f64) -> usize {
    if let Some((inv_h2, q)) = &op.split {
        return sturm_count_relative(*inv_h2, q, x);
    }
    let pivmin = f64::MIN_POSITIVE.sqrt() * op.norm_inf().max(1.0);
    let mut count = 0;
    let mut q = op.diag[0] - x;
    for i in 0..op.dim() {
        if i > 0 {
            q = op.diag[i] - x - op.off[i - 1] * op.off[i - 1] / q;
        }
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

// For `A = (1/h²) tridiag(-1, 2, -1) + diag(q)` the pivots are written as
// `(1 + s_i)/h²`, giving `s_i = s_{i-1}/(1 + s_{i-1}) + h²(q_i - x)`. The
// pivots of the bare Laplacian tend to 1/h², so this tracks only the small
// departure and keeps round-off at O(ε/h) rather than O(ε/h²).
fn sturm_count_relative(inv_h2: f64, q: &[f64], x: f64) -> usize {
    let h2 = 1.0 / inv_h2;
    let pivmin = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    // carry = s_{i-1}/(1 + s_{i-1}); the bare Laplacian starts from s_{-1} = ∞.
    let mut carry = 1.0;
    for &qi in q {
        let s = carry + h2 * (qi - x);
        let mut pivot = 1.0 + s;
        if pivot.abs() < pivmin {
            pivot = -pivmin;
        }
        if pivot < 0.0 {
            count += 1;
        }
        carry = s / pivot;
    }
    count
}

/// Gershgorin interval containing the whole spectrum.
pub fn gershgorin(op: &TridiagOperator) -> (f64, f64) {
    let n = op.dim();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += op.off[i - 1].abs();
        }
        if i + 1 < n {
            r += op.off[i].abs();
        }
        lo = lo.min(op.diag[i] - r);
        hi = hi.max(op.diag[i] + r);
    }
    let pad = 1e-14 * lo.abs().max(hi.abs()).max(1.0);
    (lo - pad, hi + pad)
}

/// The `n`-th smallest eigenvalue (1-based) by bisection on the Sturm count.
pub fn nth_eigenvalue(op: &TridiagOperator, n: usize, tol: f64) -> Result<f64> {
    let dim = op.dim();
    if n == 0 || n > dim {
        return Err(KuoError::IndexOutOfRange { index: n, dim });
    }
    if !(tol > 0.0) {
        return Err(KuoError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (mut lo, mut hi) = gershgorin(op);
    // Invariant: count(lo) < n <= count(hi).
    for _ in 0..400 {
        let width = hi - lo;
        if width <= tol || width <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            break;
        }
        let mid = lo + 0.5 * width;
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(op, mid) >= n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo + 0.5 * (hi - lo))
}

/// Eigenvector of `op` for an eigenvalue estimate `lambda`, as nodal values of
/// unit discrete L² norm with the first-extremum sign convention.
pub fn eigenvector(op: &TridiagOperator, lambda: f64) -> Result<Vec<f64>> {
    eigenvector_orthogonal(op, lambda, &[]).map(|(v, _, _)| v)
}

/// Inverse iteration at shift `lambda`, re-orthogonalized against `lower`
/// (previously computed vectors of the symmetric matrix, unit Euclidean norm).
///
/// Returns the nodal vector, the Rayleigh-quotient refined eigenvalue and the
/// relative residual. The last two refer to the symmetrized matrix.
pub fn eigenvector_orthogonal(
    op: &TridiagOperator,
    lambda: f64,
    lower: &[Vec<f64>],
) -> Result<(Vec<f64>, f64, f64)> {
    let (u, refined, residual) = inverse_iteration(op, lambda, lower)?;
    let mut v = op.to_nodal(&u);
    let norm = op.grid.l2_norm(&v);
    v.iter_mut().for_each(|x| *x /= norm);
    apply_sign_convention(&mut v);
    Ok((v, refined, residual))
}

/// Inverse iteration returning a unit Euclidean vector of the symmetric matrix.
pub(crate) fn inverse_iteration(
    op: &TridiagOperator,
    lambda: f64,
    lower: &[Vec<f64>],
) -> Result<(Vec<f64>, f64, f64)> {
    let n = op.dim();
    let anorm = op.norm_inf().max(f64::MIN_POSITIVE);
    let lu = TridiagLu::factor(op, lambda, anorm);
    // Deterministic, non-symmetric start so odd modes are not missed.
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + (i + 1) as f64 / n as f64).collect();
    orthogonalize(&mut x, lower);
    normalize(&mut x);
    let mut best: Option<(f64, f64)> = None;
    for _ in 0..MAX_INVERSE_ITERATIONS {
        let mut y = lu.solve(&x);
        orthogonalize(&mut y, lower);
        let norm = euclid(&y);
        if !norm.is_finite() || norm == 0.0 {
            return Err(KuoError::NoConvergence(format!(
                "inverse iteration broke down at shift {lambda}"
            )));
        }
        y.iter_mut().for_each(|v| *v /= norm);
        x = y;
        let ax = op.matvec(&x);
        let rq: f64 = ax.iter().zip(&x).map(|(a, b)| a * b).sum();
        let res = ax
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - rq * b).powi(2))
            .sum::<f64>()
            .sqrt()
            / anorm;
        best = Some((rq, res));
        if res <= RESIDUAL_TOL {
            if (rq - lambda).abs() > 1e-8 * anorm.max(1.0) {
                return Err(KuoError::NoConvergence(format!(
                    "shift {lambda} is not near the spectrum (nearest eigenvalue {rq})"
                )));
            }
            return Ok((x, rq, res));
        }
    }
    let (rq, res) = best.unwrap_or((lambda, f64::INFINITY));
    Err(KuoError::NoConvergence(format!(
        "inverse iteration at shift {lambda} stalled with residual {res:e} (Rayleigh quotient {rq})"
    )))
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) {
    let n = euclid(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    for w in against {
        let d: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(w).for_each(|(a, b)| *a -= d * b);
    }
}

/// Flips the sign so the first significant local extremum is positive.
pub fn apply_sign_convention(v: &mut [f64]) {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return;
    }
    let n = v.len();
    let first = (0..n).find(|&i| {
        let a = v[i].abs();
        let left = if i > 0 { v[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { v[i + 1].abs() } else { 0.0 };
        a > 1e-3 * scale && a >= left && a >= right
    });
    if let Some(i) = first {
        if v[i] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

// LU factorization of A - σI with partial pivoting (row interchanges between
// neighbours only), as in LAPACK's dgttrf/dgtts2.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(op: &TridiagOperator, shift: f64, anorm: f64) -> Self {
        let n = op.dim();
        let mut dl = op.off.clone();
        let mut du = op.off.clone();
        let mut d: Vec<f64> = op.diag.iter().map(|x| x - shift).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        let tiny = f64::EPSILON * anorm;
        for p in d.iter_mut() {
            if p.abs() < tiny {
                *p = if *p < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut b = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
        b
    }
}

/// Computes the `n`-th eigenpair of `op` without extrapolation. Lower-index
/// vectors are computed first when `n > 1` so clustered eigenvalues are
/// separated by re-orthogonalization.
pub fn eigenpair(op: &TridiagOperator, n: usize) -> Result<EigenPair> {
    let mut lower: Vec<Vec<f64>> = Vec::new();
    let anorm = op.norm_inf();
    let lambda = nth_eigenvalue(op, n, BISECTION_TOL)?;
    // Only neighbours closer than this need explicit orthogonalization.
    let cluster = 1e-7 * anorm.max(1.0);
    for j in (1..n).rev() {
        let mu = nth_eigenvalue(op, j, BISECTION_TOL)?;
        if (lambda - mu).abs() > cluster {
            break;
        }
        let (u, _, _) = inverse_iteration(op, mu, &lower)?;
        lower.push(u);
    }
    let (u, _, residual) = inverse_iteration(op, lambda, &lower)?;
    let mut v = op.to_nodal(&u);
    let norm = op.grid.l2_norm(&v);
    v.iter_mut().for_each(|x| *x /= norm);
    apply_sign_convention(&mut v);
    Ok(EigenPair {
        index: n,
        value: lambda,
        vector: v,
        grid: op.grid.clone(),
        discrete_value: lambda,
        residual,
        extrapolated: false,
        error_estimate: 0.0,
    })
}

/// Richardson extrapolation of `(h, λ(h))` pairs assuming an even expansion
/// `λ(h) = λ + c₁h² + c₂h⁴ + …`. Returns the extrapolated value and the size
/// of the last correction applied.
pub fn extrapolate(values: &[(f64, f64)]) -> Result<(f64, f64)> {
    if values.len() < 3 {
        return Err(KuoError::InsufficientSequence {
            needed: 3,
            got: values.len(),
        });
    }
    if values.windows(2).any(|w| !(w[1].0 < w[0].0) || w[1].0 <= 0.0) {
        return Err(KuoError::InvalidArgument(
            "extrapolation needs strictly decreasing positive spacings".into(),
        ));
    }
    let m = values.len();
    let hs: Vec<f64> = values.iter().map(|p| p.0).collect();
    let mut table: Vec<Vec<f64>> = values.iter().map(|p| vec![p.1]).collect();
    for i in 1..m {
        for j in 1..=i {
            let ratio = (hs[i - j] / hs[i]).powi(2 * j as i32);
            let prev = table[i][j - 1];
            let next = prev + (prev - table[i - 1][j - 1]) / (ratio - 1.0);
            table[i].push(next);
        }
    }
    let best = table[m - 1][m - 1];
    let correction = (best - table[m - 1][m - 2]).abs();
    Ok((best, correction))
}
