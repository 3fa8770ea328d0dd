//! Cut-off perturbations of Couette flow,
//! `U_{γ,a}(y) = y + ½β y² I_γ(y) + aγ² erf((y−5γ)/γ) I_γ(y−5γ)` with
//! `I_γ(y) = Ĩ(y/γ)`, and their principal Rayleigh–Kuo eigenvalue at `c = 0`.

mod cutoff;
mod erf;

pub use cutoff::{bump, constants, cutoff, cutoff_prime, cutoff_second, normalizer, CutoffConstants};
pub use erf::{erf, erf_prime};

use crate::error::{KuoError, Result};
use crate::quadrature::{adaptive_kronrod, adaptive_simpson};
use crate::rayleigh_kuo::{lambda_n_general, ShearProfile};
use crate::roots::bisect;
use crate::tridiag::EigenPair;

/// Grid intervals per cut-off width γ; the profile varies on scale γ so the
/// grid must resolve it regardless of the requested resolution.
pub const INTERVALS_PER_GAMMA: f64 = 32.0;

/// Default coarse resolution for modified-flow eigenvalues.
pub const DEFAULT_RESOLUTION: usize = 256;

/// Scan steps used by [`level_set_a`] before bisection.
pub const LEVEL_SET_SCAN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedFlowParams {
    beta: f64,
    gamma: f64,
    a: f64,
}

impl ModifiedFlowParams {
    /// Validates `0 < γ < min(1/2, 1/(10|β|))`, `a ≥ 0`, and the monotonicity
    /// guard `γ((|β|/2)M + aM₀) < 1` that keeps `U' > 0`.
    pub fn new(beta: f64, gamma: f64, a: f64) -> Result<Self> {
        if !beta.is_finite() || !gamma.is_finite() || !a.is_finite() {
            return Err(KuoError::InvalidArgument("non-finite modified-flow parameter".into()));
        }
        if a < 0.0 {
            return Err(KuoError::InvariantViolation(format!("a = {a} must be >= 0")));
        }
        let cap = if beta == 0.0 { 0.5 } else { 0.5f64.min(1.0 / (10.0 * beta.abs())) };
        if !(gamma > 0.0 && gamma < cap) {
            return Err(KuoError::InvariantViolation(format!(
                "gamma = {gamma} must lie in (0, min(1/2, 1/(10|beta|))) = (0, {cap})"
            )));
        }
        let c = constants();
        let slope = gamma * (0.5 * beta.abs() * c.m + a * c.m0);
        if slope >= 1.0 {
            return Err(KuoError::InvariantViolation(format!(
                "monotonicity guard gamma*((|beta|/2)M + a*M0) = {slope} must be < 1"
            )));
        }
        Ok(Self { beta, gamma, a })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Grid intervals actually used for a requested coarse `resolution`.
    pub fn effective_resolution(&self, resolution: usize) -> usize {
        let floor = (INTERVALS_PER_GAMMA / self.gamma).ceil() as usize;
        resolution.max(floor.next_power_of_two())
    }
}

/// `(U, U', U'')` at `y`.
pub fn evaluate(p: &ModifiedFlowParams, y: f64) -> [f64; 3] {
    let (beta, g, a) = (p.beta, p.gamma, p.a);
    let mut u = [y, 1.0, 0.0];

    let s = y / g;
    if s.abs() < 2.0 {
        let (i0, i1, i2) = (cutoff(s), cutoff_prime(s), cutoff_second(s));
        let p0 = s * s * i0;
        let p1 = 2.0 * s * i0 + s * s * i1;
        let p2 = 2.0 * i0 + 4.0 * s * i1 + s * s * i2;
        let half = 0.5 * beta;
        u[0] += half * g * g * p0;
        u[1] += half * g * p1;
        u[2] += half * p2;
    }

    let t = (y - 5.0 * g) / g;
    if a != 0.0 && t.abs() < 2.0 {
        let (i0, i1, i2) = (cutoff(t), cutoff_prime(t), cutoff_second(t));
        let e0 = erf(t);
        let e1 = erf_prime(t);
        let e2 = -2.0 * t * e1;
        u[0] += a * g * g * e0 * i0;
        u[1] += a * g * (e1 * i0 + e0 * i1);
        u[2] += a * (e2 * i0 + 2.0 * e1 * i1 + e0 * i2);
    }
    u
}

/// The modified shear profile as a [`ShearProfile`].
pub fn profile(params: ModifiedFlowParams) -> ShearProfile {
    let label = format!(
        "modified(beta={}, gamma={}, a={})",
        params.beta, params.gamma, params.a
    );
    ShearProfile::from_fn(label, move |y| evaluate(&params, y))
}

/// `Q_{γ,a}(y) = (U'' − β)/U`, with the removable point handled by the exact
/// vanishing of the numerator on `[-γ, γ]`.
pub fn potential(params: &ModifiedFlowParams, y: f64) -> f64 {
    let [u, _, d2u] = evaluate(params, y);
    let num = d2u - params.beta;
    if num == 0.0 {
        0.0
    } else {
        num / u
    }
}

fn b0_integrand(x: f64) -> f64 {
    let p = 1.0 / (x + 5.0).powi(3);
    let m = 1.0 / (5.0 - x).powi(3);
    2.0 * (p - m) * erf(x) * cutoff(x)
}

/// `b₀ = 2∫₀² ((x+5)⁻³ − (5−x)⁻³) erf(x) Ĩ(x) dx`, a negative constant.
pub fn b0() -> f64 {
    adaptive_kronrod(b0_integrand, 0.0, 2.0, 1e-14)
}

/// The same integral by adaptive Simpson, an independent rule used to bound the
/// quadrature error of [`b0`].
pub fn b0_simpson() -> f64 {
    adaptive_simpson(b0_integrand, 0.0, 2.0, 1e-14)
}

/// `λ_{n,γ,a}`: the n-th eigenvalue of `-φ'' + Q_{γ,a} φ` on [-1, 1].
///
/// The coarse grid is raised to at least `INTERVALS_PER_GAMMA / γ` intervals
/// (rounded up to a power of two); the returned pair records the grid used.
pub fn lambda_n_modified(params: ModifiedFlowParams, n: usize, resolution: usize) -> Result<EigenPair> {
    let res = params.effective_resolution(resolution);
    lambda_n_general(&profile(params), params.beta, 0.0, n, res)
}

/// Default upper end of the `a` search: `(4d − 6)/(3b₀) + 1`.
pub fn default_a_max(d: f64) -> f64 {
    (4.0 * d - 6.0) / (3.0 * b0()) + 1.0
}

/// Small-γ upper limit `3 + (3/2) b₀ a` of `λ_{1,γ,a}`.
pub fn lambda1_asymptote(a: f64) -> f64 {
    3.0 + 1.5 * b0() * a
}

/// Smallest `a ∈ [0, a_max]` with `λ_{1,γ,a} = d`: scan in steps of
/// `a_max/64` for the first crossing, then bisect to `tol` in λ.
pub fn level_set_a(beta: f64, gamma: f64, d: f64, a_max: f64, tol: f64) -> Result<f64> {
    level_set_a_with(beta, gamma, d, a_max, tol, DEFAULT_RESOLUTION)
}

pub fn level_set_a_with(
    beta: f64,
    gamma: f64,
    d: f64,
    a_max: f64,
    tol: f64,
    resolution: usize,
) -> Result<f64> {
    if !(a_max > 0.0) || !(tol > 0.0) {
        return Err(KuoError::InvalidArgument("a_max and tol must be positive".into()));
    }
    ModifiedFlowParams::new(beta, gamma, a_max)?;
    let lambda = |a: f64| -> Result<f64> {
        let p = ModifiedFlowParams::new(beta, gamma, a)?;
        Ok(lambda_n_modified(p, 1, resolution)?.value - d)
    };
    let f0 = lambda(0.0)?;
    let fmax = lambda(a_max)?;
    if !(f0 > 0.0 && fmax < 0.0) {
        return Err(KuoError::NoBracket(format!(
            "lambda_1(a=0) - d = {f0}, lambda_1(a={a_max}) - d = {fmax}; gamma = {gamma} may not be small enough"
        )));
    }
    let step = a_max / LEVEL_SET_SCAN as f64;
    let (mut lo, mut flo) = (0.0, f0);
    for k in 1..=LEVEL_SET_SCAN {
        let a = if k == LEVEL_SET_SCAN { a_max } else { k as f64 * step };
        let fa = if k == LEVEL_SET_SCAN { fmax } else { lambda(a)? };
        if fa <= 0.0 {
            if fa == 0.0 {
                return Ok(a);
            }
            return bisect(lambda, lo, a, flo, fa, tol, 1e-12 * a_max);
        }
        lo = a;
        flo = fa;
    }
    unreachable!("the last scan point is negative by the bracket check")
}

/// Numerical lower envelope of `C_β = inf_{γ} λ_{1,γ,0}` over the sampled `gammas`.
pub fn c_beta_estimate(beta: f64, gammas: &[f64], resolution: usize) -> Result<f64> {
    let mut best = f64::INFINITY;
    for &g in gammas {
        let value = lambda_n_modified(ModifiedFlowParams::new(beta, g, 0.0)?, 1, resolution)?.value;
        best = best.min(value);
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(KuoError::InvalidArgument("empty gamma sample".into()))
    }
}
