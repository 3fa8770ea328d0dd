//! First-order bifurcated waves `ψ = ψ₀(y) + κ φ₀(y) cos(αx)` from a shear flow
//! whose Rayleigh–Kuo ground state `λ₁ = −α²` is negative, and the residual of
//! the steady vorticity equation they leave behind.
//!
//! Velocities follow the stream-function convention `u = ∂_y ψ`, `v = −∂_x ψ`:
//! `u_κ = u + κφ₀' cos(αx)`, `v_κ = ακφ₀ sin(αx)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::atlas::SpectralAtlas;
use crate::error::{KuoError, Result};
use crate::rayleigh_kuo::{lambda_n_general, ShearProfile};
use crate::tridiag::EigenPair;

/// Largest amplitude accepted by [`construct`].
pub const MAX_KAPPA: f64 = 0.1;

/// Ground states closer than this to a second eigenvalue of zero are rejected.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Default `x` samples per period for [`residual_norm`].
pub const DEFAULT_NX: usize = 128;

#[derive(Debug, Clone)]
pub struct WaveApproximation {
    pub profile: ShearProfile,
    pub beta: f64,
    pub c: f64,
    /// `√(−λ₁)` with the extrapolated eigenvalue.
    pub alpha0: f64,
    /// `√(−λ₁)` on the grid carrying `phi0`; the residual uses this one so that
    /// the first-order term cancels to solver precision.
    pub alpha_grid: f64,
    pub kappa: f64,
    /// Closed-grid samples of the mode (Dirichlet zeros included).
    pub phi0: Vec<f64>,
    /// Closed grid nodes, uniform on [-1, 1].
    pub nodes: Vec<f64>,
    pub period: f64,
    pub eigen: EigenPair,
}

fn ground_state(profile: &ShearProfile, beta: f64, c: f64, resolution: usize) -> Result<EigenPair> {
    let pair = lambda_n_general(profile, beta, c, 1, resolution)?;
    if pair.value >= 0.0 {
        return Err(KuoError::PositiveEigenvalue(pair.value));
    }
    Ok(pair)
}

/// Builds the first-order wave for `(profile, β, c)` at amplitude `kappa`.
pub fn construct(
    profile: ShearProfile,
    beta: f64,
    c: f64,
    kappa: f64,
    resolution: usize,
) -> Result<WaveApproximation> {
    if !(kappa.abs() <= MAX_KAPPA) {
        return Err(KuoError::InvalidArgument(format!(
            "|kappa| = {} exceeds {MAX_KAPPA}",
            kappa.abs()
        )));
    }
    let pair = ground_state(&profile, beta, c, resolution)?;
    let second = lambda_n_general(&profile, beta, c, 2, resolution)?;
    if second.value.abs() < DEGENERACY_TOL {
        return Err(KuoError::DegenerateEigenvalue(format!(
            "second eigenvalue {} is zero to within {DEGENERACY_TOL}",
            second.value
        )));
    }
    if pair.discrete_value >= 0.0 {
        return Err(KuoError::PositiveEigenvalue(pair.discrete_value));
    }
    let nodes = pair.grid.closed_nodes();
    let mut phi0 = Vec::with_capacity(nodes.len());
    phi0.push(0.0);
    phi0.extend_from_slice(&pair.vector);
    phi0.push(0.0);
    let alpha0 = (-pair.value).sqrt();
    Ok(WaveApproximation {
        profile,
        beta,
        c,
        alpha0,
        alpha_grid: (-pair.discrete_value).sqrt(),
        kappa,
        phi0,
        nodes,
        period: 2.0 * PI / alpha0,
        eigen: pair,
    })
}

impl WaveApproximation {
    /// Same wave at a different amplitude.
    pub fn with_kappa(&self, kappa: f64) -> Self {
        Self {
            kappa,
            ..self.clone()
        }
    }

    /// Replaces the mode by `phi` (closed-grid samples). Used as a negative
    /// control: without the eigenfunction relation the residual is O(κ).
    pub fn with_mode(&self, phi: Vec<f64>) -> Result<Self> {
        if phi.len() != self.nodes.len() {
            return Err(KuoError::InvalidArgument(format!(
                "mode has {} samples for {} nodes",
                phi.len(),
                self.nodes.len()
            )));
        }
        Ok(Self {
            phi0: phi,
            ..self.clone()
        })
    }

    /// A smooth random Dirichlet mode with the same discrete L² norm as `phi0`.
    pub fn random_mode(&self, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<f64> = (1..=6).map(|k| rng.gen_range(-1.0..1.0) / k as f64).collect();
        let mut phi: Vec<f64> = self
            .nodes
            .iter()
            .map(|&y| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, a)| a * ((k + 1) as f64 * PI * (y + 1.0) / 2.0).sin())
                    .sum()
            })
            .collect();
        let n0 = l2(&self.phi0, self.spacing());
        let n1 = l2(&phi, self.spacing());
        for v in &mut phi {
            *v *= n0 / n1;
        }
        *phi.first_mut().unwrap() = 0.0;
        *phi.last_mut().unwrap() = 0.0;
        phi
    }

    pub fn spacing(&self) -> f64 {
        self.nodes[1] - self.nodes[0]
    }

    fn alpha(&self) -> f64 {
        self.alpha_grid
    }

    /// `(u_κ, v_κ)` at closed-grid node `j` and abscissa `x`.
    pub fn velocity(&self, j: usize, x: f64) -> (f64, f64) {
        let dphi = d1_fourth_order(&self.phi0, self.spacing());
        let a = self.alpha();
        (
            self.profile.u(self.nodes[j]) + self.kappa * dphi[j] * (a * x).cos(),
            a * self.kappa * self.phi0[j] * (a * x).sin(),
        )
    }

    /// `max |∂_x u_κ + ∂_y v_κ|` over the closed grid and `nx` abscissae, with
    /// both y-derivatives taken by the same fourth-order stencil.
    pub fn divergence_max(&self, nx: usize) -> f64 {
        let h = self.spacing();
        let a = self.alpha();
        let dphi = d1_fourth_order(&self.phi0, h);
        let mut worst: f64 = 0.0;
        for i in 0..nx {
            let x = i as f64 * 2.0 * PI / (a * nx as f64);
            let (s, _) = (a * x).sin_cos();
            let v: Vec<f64> = self.phi0.iter().map(|p| a * self.kappa * p * s).collect();
            let dv = d1_fourth_order(&v, h);
            for (j, dvj) in dv.iter().enumerate() {
                let dudx = -self.kappa * a * dphi[j] * s;
                worst = worst.max((dudx + dvj).abs());
            }
        }
        worst
    }

    /// `max_x |v_κ(x, ±1)|`.
    pub fn boundary_v_max(&self, nx: usize) -> f64 {
        let last = self.nodes.len() - 1;
        (0..nx)
            .flat_map(|i| {
                let x = i as f64 * self.period / nx as f64;
                [self.velocity(0, x).1.abs(), self.velocity(last, x).1.abs()]
            })
            .fold(0.0, f64::max)
    }
}

fn l2(v: &[f64], h: f64) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() * h).sqrt()
}

/// Fourth-order first derivative on a uniform closed grid (one-sided near the ends).
pub fn d1_fourth_order(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "fourth-order stencil needs at least 5 points");
    let mut d = vec![0.0; n];
    let c12 = 12.0 * h;
    let forward = |k: usize| (-25.0 * f[k] + 48.0 * f[k + 1] - 36.0 * f[k + 2] + 16.0 * f[k + 3] - 3.0 * f[k + 4]) / c12;
    let skewed = |k: usize| (-3.0 * f[k - 1] - 10.0 * f[k] + 18.0 * f[k + 1] - 6.0 * f[k + 2] + f[k + 3]) / c12;
    d[0] = forward(0);
    d[1] = skewed(1);
    for j in 2..n - 2 {
        d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / c12;
    }
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / c12;
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / c12;
    d
}

/// Discrete L² norm over one period of the steady residual
/// `R = (u_κ − c) ∂_x ω + v_κ (∂_y ω + β)`, `ω = ∂_x v_κ − ∂_y u_κ`.
///
/// Each field is a single Fourier mode in `x`, so x-derivatives are exact.
/// `φ₀''` uses the three-point stencil of the eigenproblem; `φ₀'` and
/// `∂_y(φ₀'' − α²φ₀)` use fourth-order differences. The sum runs over the
/// interior nodes and `nx` equispaced abscissae.
pub fn residual_norm(wave: &WaveApproximation, beta: f64, nx: usize) -> f64 {
    let h = wave.spacing();
    let a = wave.alpha();
    let k = wave.kappa;
    let phi = &wave.phi0;
    let n = phi.len();
    // g = φ₀'' − α²φ₀, zero at the walls where φ₀ vanishes.
    let mut g = vec![0.0; n];
    for j in 1..n - 1 {
        g[j] = (phi[j + 1] - 2.0 * phi[j] + phi[j - 1]) / (h * h) - a * a * phi[j];
    }
    let dphi = d1_fourth_order(phi, h);
    let dg = d1_fourth_order(&g, h);
    let dx = 2.0 * PI / (a * nx as f64);

    let mut sum = 0.0;
    for j in 1..n - 1 {
        let [u, _, d2u] = wave.profile.eval(wave.nodes[j]);
        for i in 0..nx {
            let (s, cs) = (a * i as f64 * dx).sin_cos();
            let uk = u + k * dphi[j] * cs;
            let vk = a * k * phi[j] * s;
            let omega_x = a * k * g[j] * s;
            let omega_y = -d2u - k * dg[j] * cs;
            let r = (uk - wave.c) * omega_x + vk * (omega_y + beta);
            sum += r * r;
        }
    }
    (sum * h * dx).sqrt()
}

/// Norm of the part of [`residual_norm`] that is linear in κ. It vanishes
/// when `phi0` solves the discrete eigenproblem exactly, so for the true mode
/// it measures eigensolver defect: an error estimate for the residual.
pub fn first_order_defect(wave: &WaveApproximation, beta: f64) -> f64 {
    let h = wave.spacing();
    let a = wave.alpha();
    let phi = &wave.phi0;
    let mut sum = 0.0;
    for j in 1..phi.len() - 1 {
        let [u, _, d2u] = wave.profile.eval(wave.nodes[j]);
        let g = (phi[j + 1] - 2.0 * phi[j] + phi[j - 1]) / (h * h) - a * a * phi[j];
        let r = (u - wave.c) * g - (d2u - beta) * phi[j];
        sum += r * r;
    }
    // ∫ sin²(αx) over one period is π/α.
    a * wave.kappa.abs() * (sum * h * PI / a).sqrt()
}

/// `2π/√(−λ₁)` for the ground state of `(profile, β, c)`.
pub fn period_estimate(profile: &ShearProfile, beta: f64, c: f64, resolution: usize) -> Result<f64> {
    let pair = ground_state(profile, beta, c, resolution)?;
    Ok(2.0 * PI / (-pair.value).sqrt())
}

/// Speed `a·c_a` of the wave with wavenumber `alpha` bifurcating from the
/// scaled Couette flow `a·y`: the operator for `(a·y, β, a·c)` coincides with
/// the Couette one at `(β/a, c)`, so `c_a` solves `λ₁(β/a, c_a) = −α²`.
pub fn scaled_couette_speed(atlas: &SpectralAtlas, beta: f64, a: f64, alpha: f64, tol: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(KuoError::InvalidArgument(format!("scale a = {a} must be positive")));
    }
    if alpha == 0.0 {
        return Err(KuoError::ZeroWavenumber);
    }
    Ok(a * atlas.speed_for_eigenvalue(beta / a, -alpha * alpha, tol)?)
}
