//! Transition value β*, the borderline curve α_β (equivalently the critical
//! period T_β), the per-period threshold β_T, wave-speed inversion, and the
//! classification of (α, β) points into the traveling-wave regions near
//! Couette flow.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{KuoError, Result};
use crate::rayleigh_kuo::{couette_endpoint_lambda1, couette_lambda1, Side, SolverSettings};
use crate::roots::bisect;
use crate::table::CurveTable;

/// Default half-width of the Γ± band in α.
pub const BORDERLINE_TOL: f64 = 1e-4;
/// Residual tolerance on `λ₁(β*, -1)` used when β* is computed implicitly.
pub const BETA_STAR_TOL: f64 = 1e-7;
/// Offset δ of the first wave-speed probe `c = -1 - δ`.
pub const SPEED_DELTA: f64 = 1e-3;

const QUARTER_PI2: f64 = PI * PI / 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// No traveling waves near Couette flow.
    O,
    GammaPlus,
    GammaMinus,
    IPlus,
    IMinus,
}

impl Region {
    /// Image under β → -β.
    pub fn mirror(self) -> Self {
        match self {
            Region::O => Region::O,
            Region::GammaPlus => Region::GammaMinus,
            Region::GammaMinus => Region::GammaPlus,
            Region::IPlus => Region::IMinus,
            Region::IMinus => Region::IPlus,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::O => "O",
            Region::GammaPlus => "Gamma+",
            Region::GammaMinus => "Gamma-",
            Region::IPlus => "I+",
            Region::IMinus => "I-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionVerdict {
    pub label: Region,
    pub beta_star: f64,
    /// Borderline wavenumber, present when |β| > β*.
    pub alpha_beta: Option<f64>,
    pub tolerance: f64,
}

/// Couette-flow spectral data at fixed discretization settings. β* is
/// computed on first use and reused.
#[derive(Debug)]
pub struct SpectralAtlas {
    settings: SolverSettings,
    beta_star: OnceLock<f64>,
}

impl SpectralAtlas {
    pub fn new(settings: SolverSettings) -> Self {
        Self {
            settings,
            beta_star: OnceLock::new(),
        }
    }

    pub fn settings(&self) -> &SolverSettings {
        &self.settings
    }

    /// `λ₁(|β|, -1)` with its error estimate (equal to `λ₁(-|β|, 1)`).
    pub fn endpoint_lambda1(&self, beta: f64) -> Result<(f64, f64)> {
        couette_endpoint_lambda1(beta.abs(), Side::Left, self.settings.resolution)
    }

    /// `λ₁(β, c)` for `c ∉ (-1, 1)`.
    pub fn lambda1(&self, beta: f64, c: f64) -> Result<(f64, f64)> {
        couette_lambda1(beta, c, &self.settings)
    }

    /// The unique β > 0 with `λ₁(β, -1) = 0`, to residual `tol`.
    pub fn find_beta_star(&self, tol: f64) -> Result<f64> {
        if !(tol >= 1e-8) {
            return Err(KuoError::InvalidArgument(format!(
                "beta_* tolerance must be at least 1e-8, got {tol}"
            )));
        }
        let f = |b: f64| self.endpoint_lambda1(b).map(|r| r.0);
        let (mut lo, mut flo) = (0.0, QUARTER_PI2);
        let mut hi = 1.0;
        let mut fhi = f(hi)?;
        while fhi > 0.0 {
            if hi > 1e9 {
                return Err(KuoError::BracketFailure(
                    "lambda_1(beta, -1) stays positive; eigensolver misconfigured".into(),
                ));
            }
            lo = hi;
            flo = fhi;
            hi *= 2.0;
            fhi = f(hi)?;
        }
        bisect(f, lo, hi, flo, fhi, tol, 1e-13)
    }

    /// β* at [`BETA_STAR_TOL`], computed once.
    pub fn beta_star(&self) -> Result<f64> {
        if let Some(b) = self.beta_star.get() {
            return Ok(*b);
        }
        let b = self.find_beta_star(BETA_STAR_TOL)?;
        Ok(*self.beta_star.get_or_init(|| b))
    }

    /// `(α_β, error)` with `α_β = sqrt(-λ₁(|β|, -1))`.
    pub fn alpha_beta(&self, beta: f64) -> Result<(f64, f64)> {
        let beta_star = self.beta_star()?;
        let b = beta.abs();
        if b < beta_star - 1e-6 {
            return Err(KuoError::BelowThreshold { beta: b, beta_star });
        }
        let (lambda, err) = self.endpoint_lambda1(b)?;
        let alpha = (-lambda).max(0.0).sqrt();
        let alpha_err = if alpha > 0.0 {
            err / (2.0 * alpha)
        } else {
            err.sqrt()
        };
        Ok((alpha, alpha_err.max(f64::EPSILON)))
    }

    /// Rows `(β, α_β, T_β, λ₁(β,-1), error_estimate)` for `β ≥ β*`.
    pub fn alpha_beta_curve(&self, betas: &[f64]) -> Result<CurveTable> {
        let beta_star = self.beta_star()?;
        let rows = betas
            .par_iter()
            .map(|&b| {
                let (alpha, err) = self.alpha_beta(b)?;
                let period = if alpha > 0.0 { 2.0 * PI / alpha } else { f64::INFINITY };
                Ok(vec![b, alpha, period, -alpha * alpha, err])
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = CurveTable::new("beta", &["alpha_beta", "period", "lambda1", "error_estimate"]);
        table.add_meta("curve", "alpha_beta");
        table.add_meta("beta_star", crate::table::format_g17(beta_star));
        self.add_provenance(&mut table);
        table.rows = rows;
        table.sort_by_input();
        Ok(table)
    }

    fn add_provenance(&self, table: &mut CurveTable) {
        let r = self.settings.resolution;
        table.add_meta("resolutions", format!("{r};{};{}", 2 * r, 4 * r));
        let sched: Vec<String> = self
            .settings
            .eps_schedule
            .iter()
            .map(|e| crate::table::format_g17(*e))
            .collect();
        table.add_meta("eps_schedule", sched.join(";"));
    }

    /// The β ≥ β* with `λ₁(β, -1) = -4π²/T²`.
    pub fn beta_t(&self, period: f64, tol: f64) -> Result<f64> {
        if !(period > 0.0) {
            return Err(KuoError::InvalidArgument(format!("period must be positive, got {period}")));
        }
        let beta_star = self.beta_star()?;
        let target = -4.0 * PI * PI / (period * period);
        let f = |b: f64| self.endpoint_lambda1(b).map(|r| r.0 - target);
        let lo = beta_star;
        let flo = f(lo)?;
        if flo <= 0.0 {
            return Ok(beta_star);
        }
        let mut hi = 2.0 * beta_star.max(1e-3);
        let mut fhi = f(hi)?;
        while fhi > 0.0 {
            if hi > 1e12 {
                return Err(KuoError::BracketFailure(format!(
                    "no beta with lambda_1(beta,-1) = {target}"
                )));
            }
            hi *= 2.0;
            fhi = f(hi)?;
        }
        bisect(f, lo, hi, flo, fhi, tol, 1e-13)
    }

    /// Region of the (α, β) half-plane containing the point.
    pub fn classify(&self, alpha: f64, beta: f64, tol: f64) -> Result<RegionVerdict> {
        if !(alpha > 0.0) {
            return Err(KuoError::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        let beta_star = self.beta_star()?;
        if beta.abs() <= beta_star {
            return Ok(RegionVerdict {
                label: Region::O,
                beta_star,
                alpha_beta: None,
                tolerance: tol,
            });
        }
        let (alpha_beta, _) = self.alpha_beta(beta)?;
        let upper = beta > 0.0;
        let label = if (alpha - alpha_beta).abs() <= tol {
            if upper {
                Region::GammaPlus
            } else {
                Region::GammaMinus
            }
        } else if alpha < alpha_beta {
            if upper {
                Region::IPlus
            } else {
                Region::IMinus
            }
        } else {
            Region::O
        };
        Ok(RegionVerdict {
            label,
            beta_star,
            alpha_beta: Some(alpha_beta),
            tolerance: tol,
        })
    }

    /// The wave speed `c₀` outside [-1, 1] with `λ₁(β, c₀) = λ₀`; `c₀ < -1`
    /// for β > 0 and `c₀ > 1` for β < 0.
    pub fn speed_for_eigenvalue(&self, beta: f64, lambda0: f64, tol: f64) -> Result<f64> {
        if beta == 0.0 {
            return Err(KuoError::OutOfRangeLambda(
                "beta = 0 has lambda_1 = pi^2/4 for every speed".into(),
            ));
        }
        if beta < 0.0 {
            return self.speed_for_eigenvalue(-beta, lambda0, tol).map(|c| -c);
        }
        let (endpoint, _) = self.endpoint_lambda1(beta)?;
        if !(lambda0 > endpoint && lambda0 < QUARTER_PI2) {
            return Err(KuoError::OutOfRangeLambda(format!(
                "lambda0 = {lambda0} outside ({endpoint}, pi^2/4)"
            )));
        }
        let f = |c: f64| self.lambda1(beta, c).map(|r| r.0 - lambda0);
        let near = -1.0 - SPEED_DELTA;
        let f_near = f(near)?;
        if f_near >= 0.0 {
            // λ₀ sits between λ₁(β,-1) and λ₁(β,-1-δ).
            return bisect(f, near, -1.0 - 1e-12, f_near, endpoint - lambda0, tol, 1e-14);
        }
        let (mut inner, mut f_inner) = (near, f_near);
        let mut far = -8.0;
        let mut f_far = f(far)?;
        while f_far < 0.0 {
            if far < -1e12 {
                return Err(KuoError::BracketFailure(format!(
                    "lambda_1(beta, c) stays below {lambda0} as c -> -inf"
                )));
            }
            inner = far;
            f_inner = f_far;
            far *= 2.0;
            f_far = f(far)?;
        }
        bisect(f, far, inner, f_far, f_inner, tol, 1e-13 * far.abs())
    }
}

impl Default for SpectralAtlas {
    fn default() -> Self {
        Self::new(SolverSettings::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atlas() -> SpectralAtlas {
        SpectralAtlas::new(SolverSettings::with_resolution(128))
    }

    #[test]
    fn beta_star_brackets_sign_change() {
        let a = atlas();
        let b = a.find_beta_star(1e-6).unwrap();
        assert!(b > 0.0);
        assert!(a.endpoint_lambda1(b).unwrap().0.abs() <= 1e-6);
        assert!(a.endpoint_lambda1(0.5 * b).unwrap().0 > 0.0);
        assert!(a.endpoint_lambda1(2.0 * b).unwrap().0 < 0.0);
    }

    #[test]
    fn mirror_is_an_involution() {
        for r in [Region::O, Region::GammaPlus, Region::GammaMinus, Region::IPlus, Region::IMinus] {
            assert_eq!(r.mirror().mirror(), r);
        }
    }

    #[test]
    fn weak_rotation_is_region_o() {
        let v = atlas().classify(1.0, 0.0, BORDERLINE_TOL).unwrap();
        assert_eq!(v.label, Region::O);
        assert!(v.alpha_beta.is_none());
    }

    #[test]
    fn classify_requires_positive_alpha() {
        assert!(atlas().classify(0.0, 1.0, BORDERLINE_TOL).is_err());
    }

    #[test]
    fn curve_rejects_subcritical_beta() {
        let a = atlas();
        let b = a.beta_star().unwrap();
        let e = a.alpha_beta_curve(&[0.5 * b]).unwrap_err();
        assert!(matches!(e, KuoError::BelowThreshold { .. }));
    }

    #[test]
    fn alpha_vanishes_at_threshold() {
        let a = atlas();
        let b = a.beta_star().unwrap();
        let (alpha, _) = a.alpha_beta(b).unwrap();
        assert!(alpha < 2e-3);
    }

    #[test]
    fn speed_rejects_out_of_range() {
        let a = atlas();
        let b = 2.0 * a.beta_star().unwrap();
        assert!(matches!(
            a.speed_for_eigenvalue(b, 3.0, 1e-7),
            Err(KuoError::OutOfRangeLambda(_))
        ));
        let (end, _) = a.endpoint_lambda1(b).unwrap();
        assert!(matches!(
            a.speed_for_eigenvalue(b, end - 0.1, 1e-7),
            Err(KuoError::OutOfRangeLambda(_))
        ));
    }
}
