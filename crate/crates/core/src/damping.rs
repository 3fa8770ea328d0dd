//! Linearized β-plane vorticity dynamics around Couette flow, one Fourier mode
//! `(k, η)` at a time in sheared coordinates:
//! `∂_t f̂ = iβk f̂ / (k² + (η − kt)²)`.
//!
//! The right-hand side is `i·(real)·f̂`, so each modulus is conserved and the
//! velocity decay comes entirely from the growing denominator (Orr mechanism).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{KuoError, Result};
use crate::fit::loglog_slope;
use crate::table::CurveTable;

/// Exponent fits use samples with `t ≥ FIT_START` only.
pub const FIT_START: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub k: i32,
    pub eta: f64,
    pub amp: Complex64,
}

impl ModeState {
    fn denominator(&self, t: f64) -> f64 {
        let k = self.k as f64;
        let shifted = self.eta - k * t;
        k * k + shifted * shifted
    }

    /// `(Û^x, Û^y)` at time `t`.
    pub fn velocity(&self, t: f64) -> (Complex64, Complex64) {
        let d = self.denominator(t);
        let k = self.k as f64;
        let i = Complex64::i();
        (
            i * (self.eta - k * t) * self.amp / d,
            -i * k * self.amp / d,
        )
    }
}

/// Modes on a rectangular lattice `k ∈ ks`, `η = j·d_eta` for `|η| ≤ eta_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeEnsemble {
    pub modes: Vec<ModeState>,
    pub d_eta: f64,
    pub t: f64,
}

impl ModeEnsemble {
    /// Builds the lattice and checks that it describes a real field: every
    /// `(k, η)` has a partner `(−k, −η)` with conjugate amplitude. `k = 0` is
    /// excluded (zero-mean data).
    pub fn lattice<F>(ks: &[i32], eta_max: f64, d_eta: f64, init: F) -> Result<Self>
    where
        F: Fn(i32, f64) -> Complex64,
    {
        if !(d_eta > 0.0) || !(eta_max > 0.0) {
            return Err(KuoError::InvalidArgument("eta lattice needs positive extent and spacing".into()));
        }
        if ks.contains(&0) {
            return Err(KuoError::ZeroWavenumber);
        }
        let m = (eta_max / d_eta).round() as i64;
        let mut modes = Vec::with_capacity(ks.len() * (2 * m as usize + 1));
        for &k in ks {
            for j in -m..=m {
                let eta = j as f64 * d_eta;
                modes.push(ModeState { k, eta, amp: init(k, eta) });
            }
        }
        let ens = Self { modes, d_eta, t: 0.0 };
        ens.check_conjugate_symmetry()?;
        Ok(ens)
    }

    /// Default lattice `k ∈ ±{1, 2, 3}`, `η ∈ [−20, 20]`, `d_eta = 0.05`.
    pub fn with_profile<F: Fn(i32, f64) -> Complex64>(init: F) -> Result<Self> {
        Self::lattice(&[-3, -2, -1, 1, 2, 3], 20.0, 0.05, init)
    }

    /// `f̂(0, k, η) = exp(−η²/2) exp(−|k|)`.
    pub fn gaussian() -> Self {
        Self::with_profile(|k, eta| Complex64::new((-0.5 * eta * eta - (k.abs() as f64)).exp(), 0.0))
            .expect("default lattice is symmetric")
    }

    /// Smooth data supported in `|η| < 4`, with a k-dependent phase.
    pub fn compact() -> Self {
        Self::with_profile(|k, eta| {
            let s = eta / 4.0;
            let modulus = if s.abs() < 1.0 {
                (-1.0 / (1.0 - s * s)).exp() * (-(k.abs() as f64)).exp()
            } else {
                0.0
            };
            Complex64::from_polar(modulus, 0.3 * eta * k.abs() as f64)
        })
        .expect("default lattice is symmetric")
    }

    pub fn check_conjugate_symmetry(&self) -> Result<()> {
        let mut index = std::collections::HashMap::new();
        for (i, m) in self.modes.iter().enumerate() {
            index.insert((m.k, (m.eta / self.d_eta).round() as i64), i);
        }
        for m in &self.modes {
            let j = (m.eta / self.d_eta).round() as i64;
            let partner = index
                .get(&(-m.k, -j))
                .map(|&i| self.modes[i].amp)
                .ok_or_else(|| KuoError::InvariantViolation(format!("mode ({}, {}) has no partner", m.k, m.eta)))?;
            if (partner - m.amp.conj()).norm() > 1e-14 * m.amp.norm().max(1e-300) {
                return Err(KuoError::InvariantViolation(format!(
                    "amplitudes at ({}, {}) and its mirror are not conjugate",
                    m.k, m.eta
                )));
            }
        }
        Ok(())
    }
}

/// Exact phase `Φ(t) = (β/k)(arctan(η/k) − arctan((η − kt)/k))`.
pub fn phase_closed_form(k: i32, eta: f64, beta: f64, t: f64) -> Result<f64> {
    if k == 0 {
        return Err(KuoError::ZeroWavenumber);
    }
    let k = k as f64;
    Ok(beta / k * ((eta / k).atan() - ((eta - k * t) / k).atan()))
}

/// Exact solution `f̂(0) e^{iΦ(t)}`.
pub fn evolve_exact(state: ModeState, beta: f64, t: f64) -> Result<ModeState> {
    let phi = phase_closed_form(state.k, state.eta, beta, t)?;
    Ok(ModeState {
        amp: state.amp * Complex64::from_polar(1.0, phi),
        ..state
    })
}

/// Classical RK4 from `t0` to `t1` with the largest uniform step not exceeding `dt`.
pub fn evolve_rk4(state: ModeState, beta: f64, t0: f64, t1: f64, dt: f64) -> Result<ModeState> {
    if !(dt > 0.0) || !(t1 >= t0) {
        return Err(KuoError::InvalidArgument(format!(
            "need dt > 0 and t1 >= t0, got dt = {dt}, [{t0}, {t1}]"
        )));
    }
    if t1 == t0 {
        return Ok(state);
    }
    let steps = ((t1 - t0) / dt - 1e-9).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    let k = state.k as f64;
    let rate = |t: f64| {
        let s = state.eta - k * t;
        beta * k / (k * k + s * s)
    };
    let i = Complex64::i();
    let mut f = state.amp;
    for n in 0..steps {
        let t = t0 + n as f64 * h;
        let (r0, r1, r2) = (rate(t), rate(t + 0.5 * h), rate(t + h));
        let k1 = i * r0 * f;
        let k2 = i * r1 * (f + 0.5 * h * k1);
        let k3 = i * r1 * (f + 0.5 * h * k2);
        let k4 = i * r2 * (f + h * k3);
        f += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(ModeState { amp: f, ..state })
}

/// `(‖P_{≠0}U^x‖, ‖U^y‖)` as `√(Σ d_eta |Û|²)` over the lattice.
pub fn velocity_norms(ens: &ModeEnsemble) -> (f64, f64) {
    let (mut sx, mut sy) = (0.0, 0.0);
    for m in &ens.modes {
        let (ux, uy) = m.velocity(ens.t);
        sx += ux.norm_sqr();
        sy += uy.norm_sqr();
    }
    ((sx * ens.d_eta).sqrt(), (sy * ens.d_eta).sqrt())
}

/// Evolves every mode with RK4 and tabulates velocity norms and the largest
/// relative modulus drift at each sample time. Fitted decay exponents over
/// `t ≥ FIT_START` are stored as `ux_exponent` / `uy_exponent` metadata.
pub fn run_damping_experiment(
    init: &ModeEnsemble,
    beta: f64,
    t_end: f64,
    dt: f64,
    sample_times: &[f64],
) -> Result<CurveTable> {
    if sample_times.is_empty() {
        return Err(KuoError::InvalidArgument("no sample times".into()));
    }
    if sample_times.windows(2).any(|w| !(w[1] > w[0])) || sample_times[0] < init.t {
        return Err(KuoError::InvalidArgument("sample times must increase from the initial time".into()));
    }
    let last = *sample_times.last().unwrap();
    if t_end < last {
        return Err(KuoError::InvalidArgument(format!("t_end = {t_end} precedes sample time {last}")));
    }

    // amps[mode][sample]
    let amps: Vec<Vec<Complex64>> = init
        .modes
        .par_iter()
        .map(|m| {
            let mut out = Vec::with_capacity(sample_times.len());
            let mut state = *m;
            let mut t = init.t;
            for &ts in sample_times {
                state = evolve_rk4(state, beta, t, ts, dt)?;
                t = ts;
                out.push(state.amp);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut table = CurveTable::new("t", &["ux_norm", "uy_norm", "max_drift", "error_estimate"]);
    for (s, &t) in sample_times.iter().enumerate() {
        let mut ens = init.clone();
        ens.t = t;
        let mut drift: f64 = 0.0;
        for (m, a) in ens.modes.iter_mut().zip(&amps) {
            let m0 = m.amp.norm();
            if m0 > 0.0 {
                drift = drift.max((a[s].norm() / m0 - 1.0).abs());
            }
            m.amp = a[s];
        }
        let (ux, uy) = velocity_norms(&ens);
        // The norms depend only on the moduli, so the drift bounds their error.
        table.push(vec![t, ux, uy, drift, drift * ux.max(uy)]);
    }

    let fit: Vec<usize> = (0..sample_times.len()).filter(|&i| sample_times[i] >= FIT_START).collect();
    table.add_meta("beta", beta);
    table.add_meta("dt", dt);
    table.add_meta("t_end", t_end);
    table.add_meta("fit_start", FIT_START);
    if fit.len() >= 2 {
        let ts: Vec<f64> = fit.iter().map(|&i| table.rows[i][0]).collect();
        let ux: Vec<f64> = fit.iter().map(|&i| table.rows[i][1]).collect();
        let uy: Vec<f64> = fit.iter().map(|&i| table.rows[i][2]).collect();
        table.add_meta("ux_exponent", loglog_slope(&ts, &ux)?);
        table.add_meta("uy_exponent", loglog_slope(&ts, &uy)?);
    }
    Ok(table)
}

/// Default sample times `0, 1, …, t_end`.
pub fn default_sample_times(t_end: f64) -> Vec<f64> {
    (0..=t_end.floor() as usize).map(|t| t as f64).collect()
}

/// Phase error `|f̂_rk4(t_end) − f̂_exact(t_end)|` for each step size, and the
/// fitted convergence order.
pub fn rk4_phase_order(state: ModeState, beta: f64, t_end: f64, dts: &[f64]) -> Result<(Vec<f64>, f64)> {
    let exact = evolve_exact(state, beta, t_end)?.amp;
    let errors = dts
        .iter()
        .map(|&dt| Ok((evolve_rk4(state, beta, 0.0, t_end, dt)?.amp - exact).norm()))
        .collect::<Result<Vec<f64>>>()?;
    let order = loglog_slope(dts, &errors)?;
    Ok((errors, order))
}

/// Upper bound `|β/k|·π` on the accumulated phase.
pub fn phase_bound(k: i32, beta: f64) -> f64 {
    (beta / k as f64).abs() * PI
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(k: i32, eta: f64) -> ModeState {
        ModeState { k, eta, amp: Complex64::new(0.6, -0.8) }
    }

    #[test]
    fn phase_trivia() {
        assert_eq!(phase_closed_form(2, 0.7, 3.0, 0.0).unwrap(), 0.0);
        assert_eq!(phase_closed_form(2, 0.7, 0.0, 50.0).unwrap(), 0.0);
        assert!(matches!(phase_closed_form(0, 0.7, 1.0, 1.0), Err(KuoError::ZeroWavenumber)));
    }

    #[test]
    fn phase_limit_and_quadrature() {
        let far = phase_closed_form(1, 0.0, 1.0, 1e12).unwrap();
        assert!((far - PI / 2.0).abs() < 1e-11);
        let (k, eta, beta, t) = (2, 1.5, 0.7, 4.0);
        let kf = k as f64;
        let integral = crate::quadrature::adaptive_kronrod(
            |s| beta * kf / (kf * kf + (eta - kf * s).powi(2)),
            0.0,
            t,
            1e-14,
        );
        assert!((phase_closed_form(k, eta, beta, t).unwrap() - integral).abs() < 1e-12);
    }

    #[test]
    fn phase_is_bounded() {
        for t in [0.5, 5.0, 50.0, 5e3] {
            for (k, eta) in [(1, -3.0), (-2, 4.0), (3, 0.1)] {
                assert!(phase_closed_form(k, eta, 2.0, t).unwrap().abs() <= phase_bound(k, 2.0));
            }
        }
    }

    #[test]
    fn zero_beta_freezes_amplitude() {
        let m = mode(1, 2.0);
        assert_eq!(evolve_rk4(m, 0.0, 0.0, 10.0, 1e-2).unwrap().amp, m.amp);
    }

    #[test]
    fn single_mode_norms() {
        let ens = ModeEnsemble {
            modes: vec![ModeState { k: 1, eta: 0.0, amp: Complex64::new(1.0, 0.0) }],
            d_eta: 0.05,
            t: 0.0,
        };
        let (ux, uy) = velocity_norms(&ens);
        assert_eq!(ux, 0.0);
        assert_eq!(uy, 0.05f64.sqrt());
        let later = ModeEnsemble { t: 10.0, ..ens };
        assert!((velocity_norms(&later).1 - 0.05f64.sqrt() / 101.0).abs() < 1e-15);
    }

    #[test]
    fn lattice_rejects_asymmetric_data() {
        let err = ModeEnsemble::lattice(&[-1, 1], 1.0, 0.5, |_, eta| Complex64::new(eta, 0.0)).unwrap_err();
        assert!(matches!(err, KuoError::InvariantViolation(_)));
        assert!(ModeEnsemble::lattice(&[0, 1], 1.0, 0.5, |_, _| Complex64::new(1.0, 0.0)).is_err());
        assert_eq!(ModeEnsemble::gaussian().modes.len(), 6 * 801);
        ModeEnsemble::compact().check_conjugate_symmetry().unwrap();
    }
}
