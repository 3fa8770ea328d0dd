//! The Rayleigh–Kuo eigenproblem
//!
//! ```text
//! -φ'' + (u'' - β)/(u - c) φ = λ φ,   φ(±1) = 0
//! ```
//!
//! for a shear profile `u` on [-1, 1], with grid-sequence extrapolation. Three
//! entry points cover wave speeds outside the flow range, the endpoint speeds
//! `c = ∓1` of Couette flow, and general profiles whose potential has a
//! removable critical layer.

use std::fmt;
use std::sync::Arc;

use crate::error::{KuoError, Result};
use crate::grid::{assemble_sampled, Grid1D};
use crate::tridiag::{self, extrapolate, nth_eigenvalue, EigenPair, BISECTION_TOL};

/// `|u - c|` below this value at a node with a non-vanishing numerator makes
/// the potential singular.
pub const SINGULAR_GAP: f64 = 1e-13;

type ProfileFn = dyn Fn(f64) -> [f64; 3] + Send + Sync;

/// A shear flow `u(y)` on [-1, 1] with its first two derivatives.
#[derive(Clone)]
pub struct ShearProfile {
    label: String,
    eval: Arc<ProfileFn>,
    range_lo: f64,
    range_hi: f64,
}

impl fmt::Debug for ShearProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ShearProfile")
            .field("label", &self.label)
            .field("range_lo", &self.range_lo)
            .field("range_hi", &self.range_hi)
            .finish()
    }
}

impl ShearProfile {
    /// Couette flow `u(y) = y`.
    pub fn couette() -> Self {
        Self::scaled(1.0).relabel("couette")
    }

    /// Scaled Couette flow `u(y) = a y`.
    pub fn scaled(a: f64) -> Self {
        Self::from_fn(format!("scaled({a})"), move |y| [a * y, a, 0.0])
    }

    /// Builds a profile from a function returning `[u, u', u'']`. The flow
    /// range is taken from a dense sample of `u` including both endpoints.
    pub fn from_fn<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> [f64; 3] + Send + Sync + 'static,
    {
        let samples = 4096;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..=samples {
            let y = -1.0 + 2.0 * i as f64 / samples as f64;
            let u = f(y)[0];
            lo = lo.min(u);
            hi = hi.max(u);
        }
        Self {
            label: label.into(),
            eval: Arc::new(f),
            range_lo: lo,
            range_hi: hi,
        }
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `[u, u', u'']` at `y`.
    pub fn eval(&self, y: f64) -> [f64; 3] {
        (self.eval)(y)
    }

    pub fn u(&self, y: f64) -> f64 {
        self.eval(y)[0]
    }

    pub fn du(&self, y: f64) -> f64 {
        self.eval(y)[1]
    }

    pub fn d2u(&self, y: f64) -> f64 {
        self.eval(y)[2]
    }

    pub fn range(&self) -> (f64, f64) {
        (self.range_lo, self.range_hi)
    }

    /// True when `c` lies in the closed flow range.
    pub fn contains_speed(&self, c: f64) -> bool {
        c >= self.range_lo && c <= self.range_hi
    }
}

/// Which endpoint speed of Couette flow is targeted: `Left` is `c = -1`
/// (requires β ≥ 0), `Right` is `c = +1` (requires β ≤ 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn speed(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }
}

/// Profile, Coriolis parameter and wave speed of one eigenproblem.
#[derive(Debug, Clone)]
pub struct RayleighKuoSpec {
    pub profile: ShearProfile,
    pub beta: f64,
    pub c: f64,
    pub singular: bool,
}

impl RayleighKuoSpec {
    pub fn new(profile: ShearProfile, beta: f64, c: f64) -> Self {
        let (lo, hi) = profile.range();
        let singular = c == lo || c == hi;
        Self {
            profile,
            beta,
            c,
            singular,
        }
    }

    pub fn couette(beta: f64, c: f64) -> Self {
        Self::new(ShearProfile::couette(), beta, c)
    }

    /// `(u''(y) - β)/(u(y) - c)`, with an exactly vanishing numerator mapped to
    /// zero (removable critical layer).
    pub fn potential(&self, y: f64) -> Result<f64> {
        potential_value(&self.profile, self.beta, self.c, y)
    }
}

fn potential_value(profile: &ShearProfile, beta: f64, c: f64, y: f64) -> Result<f64> {
    let [u, _, d2u] = profile.eval(y);
    let numerator = d2u - beta;
    if numerator == 0.0 {
        return Ok(0.0);
    }
    let gap = u - c;
    if gap.abs() < SINGULAR_GAP {
        return Err(KuoError::SingularPotential { y, gap });
    }
    Ok(numerator / gap)
}

/// Grid resolution and regularization schedule shared by the solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    /// Number of grid intervals on the coarsest of the three extrapolation
    /// levels (`h = 2 / resolution`).
    pub resolution: usize,
    /// Decreasing offsets `ε` for the regularized endpoint cross-check.
    pub eps_schedule: Vec<f64>,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            resolution: 256,
            eps_schedule: default_eps_schedule(),
        }
    }
}

impl SolverSettings {
    pub fn with_resolution(resolution: usize) -> Self {
        Self {
            resolution,
            ..Self::default()
        }
    }
}

/// `0.1, 0.05, 0.025, …` (eight terms).
pub fn default_eps_schedule() -> Vec<f64> {
    (0..8).map(|k| 0.1 / 2f64.powi(k)).collect()
}

/// Extrapolated eigenvalue with the coarse-grid eigenvector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Extrapolated {
    pub value: f64,
    pub error: f64,
    pub coarse: f64,
}

/// Solves on `resolution`, `2·resolution`, `4·resolution` intervals and
/// extrapolates in `h²`.
pub(crate) fn extrapolated_eigenvalue<F>(potential: F, n: usize, resolution: usize) -> Result<Extrapolated>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut seq = Vec::with_capacity(3);
    for level in 0..3 {
        let intervals = resolution << level;
        let grid = Grid1D::with_intervals(intervals)?;
        let op = sampled_operator(&grid, &potential)?;
        let value = nth_eigenvalue(&op, n, BISECTION_TOL)?;
        seq.push((2.0 / intervals as f64, value));
    }
    let (value, error) = extrapolate(&seq)?;
    Ok(Extrapolated {
        value,
        error: floor_error(error, value),
        coarse: seq[0].1,
    })
}

fn sampled_operator<F>(grid: &Grid1D, potential: &F) -> Result<crate::grid::TridiagOperator>
where
    F: Fn(f64) -> Result<f64>,
{
    let q = grid
        .nodes()
        .iter()
        .map(|&y| potential(y))
        .collect::<Result<Vec<f64>>>()?;
    assemble_sampled(grid, q)
}

fn floor_error(error: f64, value: f64) -> f64 {
    error.max(4.0 * f64::EPSILON * value.abs().max(1.0))
}

fn solve_pair<F>(potential: F, n: usize, resolution: usize) -> Result<EigenPair>
where
    F: Fn(f64) -> Result<f64>,
{
    check_resolution(resolution)?;
    let ext = extrapolated_eigenvalue(&potential, n, resolution)?;
    let grid = Grid1D::with_intervals(resolution)?;
    let op = sampled_operator(&grid, &potential)?;
    let mut pair = tridiag::eigenpair(&op, n)?;
    pair.discrete_value = ext.coarse;
    pair.value = ext.value;
    pair.error_estimate = ext.error;
    pair.extrapolated = true;
    Ok(pair)
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < 64 {
        return Err(KuoError::InvalidArgument(format!(
            "resolution must be at least 64, got {resolution}"
        )));
    }
    Ok(())
}

/// `n`-th eigenvalue for a wave speed strictly outside the flow range.
pub fn lambda_n_regular(spec: &RayleighKuoSpec, n: usize, resolution: usize) -> Result<EigenPair> {
    let (lo, hi) = spec.profile.range();
    if spec.profile.contains_speed(spec.c) {
        return Err(KuoError::SingularSpeed { c: spec.c, lo, hi });
    }
    solve_pair(|y| spec.potential(y), n, resolution)
}

/// `n`-th eigenvalue for an arbitrary profile. The speed may lie inside the
/// flow range as long as the numerator `u'' - β` vanishes wherever `u = c`
/// on the grid.
pub fn lambda_n_general(
    profile: &ShearProfile,
    beta: f64,
    c: f64,
    n: usize,
    resolution: usize,
) -> Result<EigenPair> {
    solve_pair(|y| potential_value(profile, beta, c, y), n, resolution)
}

/// Principal eigenvalue at a Couette endpoint speed.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularEigen {
    /// Endpoint problem solved directly: the potential `-β/(y ∓ 1)` is finite
    /// at every interior node and the eigenfunction vanishes linearly at the
    /// singular endpoint, so the grid sequence keeps its `h²` expansion.
    pub pair: EigenPair,
    /// `(ε, λ₁(β, ∓(1 + ε)))` along the schedule.
    pub regularized: Vec<(f64, f64)>,
    /// Limit `ε → 0` of the regularized sequence.
    pub regularized_limit: f64,
    pub regularized_error: f64,
}

impl SingularEigen {
    pub fn value(&self) -> f64 {
        self.pair.value
    }

    pub fn error_estimate(&self) -> f64 {
        self.pair.error_estimate
    }
}

/// `λ₁(β, -1)` (left) or `λ₁(β, 1)` (right) for Couette flow.
///
/// The returned eigenvalue comes from the direct endpoint discretization; the
/// regularized speeds `c = ∓(1 + ε)` are solved along `eps_schedule` as a
/// certificate: that sequence must decrease toward the endpoint value and
/// stay above it.
pub fn lambda_1_singular(
    beta: f64,
    side: Side,
    eps_schedule: &[f64],
    resolution: usize,
) -> Result<SingularEigen> {
    match side {
        Side::Left if beta < 0.0 => {
            return Err(KuoError::WrongSignBeta(format!(
                "c = -1 needs beta >= 0, got {beta}"
            )))
        }
        Side::Right if beta > 0.0 => {
            return Err(KuoError::WrongSignBeta(format!(
                "c = +1 needs beta <= 0, got {beta}"
            )))
        }
        _ => {}
    }
    if eps_schedule.len() < 4 {
        return Err(KuoError::InsufficientSequence {
            needed: 4,
            got: eps_schedule.len(),
        });
    }
    if eps_schedule.windows(2).any(|w| !(w[1] < w[0])) || eps_schedule.iter().any(|e| *e <= 0.0) {
        return Err(KuoError::InvalidArgument(
            "eps schedule must be positive and strictly decreasing".into(),
        ));
    }
    check_resolution(resolution)?;

    let c = side.speed();
    let endpoint = move |y: f64| -> Result<f64> {
        if beta == 0.0 {
            return Ok(0.0);
        }
        let gap = y - c;
        if gap == 0.0 {
            return Err(KuoError::SingularPotential { y, gap });
        }
        Ok(-beta / gap)
    };
    let pair = solve_pair(endpoint, 1, resolution)?;

    let regularized = eps_schedule
        .iter()
        .map(|&eps| {
            let shifted = c * (1.0 + eps);
            let ext = extrapolated_eigenvalue(|y| Ok(-beta / (y - shifted)), 1, resolution)?;
            Ok((eps, ext.value, ext.error))
        })
        .collect::<Result<Vec<(f64, f64, f64)>>>()?;

    let slack = |e1: f64, e2: f64| 1e-9 + 10.0 * (e1 + e2);
    for w in regularized.windows(2) {
        if w[1].1 > w[0].1 + slack(w[0].2, w[1].2) {
            return Err(KuoError::NonMonotoneSequence(format!(
                "lambda_1 at eps = {} is {} but at eps = {} is {}; refine the resolution",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    let last = regularized[regularized.len() - 1];
    if pair.value > last.1 + slack(pair.error_estimate, last.2) {
        return Err(KuoError::NonMonotoneSequence(format!(
            "endpoint value {} exceeds the regularized value {} at eps = {}",
            pair.value, last.1, last.0
        )));
    }
    let (regularized_limit, regularized_error) = eps_limit(&regularized);
    Ok(SingularEigen {
        pair,
        regularized: regularized.iter().map(|r| (r.0, r.1)).collect(),
        regularized_limit,
        regularized_error,
    })
}

// The regularized eigenvalue behaves like λ + Aε + Bε² log ε + Cε² for small
// ε. Fit the last four points exactly; the shift to the previous window is the
// error estimate.
fn eps_limit(seq: &[(f64, f64, f64)]) -> (f64, f64) {
    let fit = |window: &[(f64, f64, f64)]| -> f64 {
        let rows: Vec<[f64; 5]> = window
            .iter()
            .map(|&(e, v, _)| [1.0, e, e * e * e.ln(), e * e, v])
            .collect();
        solve4(rows).unwrap_or(window[window.len() - 1].1)
    };
    let m = seq.len();
    let last = fit(&seq[m - 4..]);
    let error = if m >= 5 {
        (last - fit(&seq[m - 5..m - 1])).abs()
    } else {
        (last - seq[m - 1].1).abs()
    };
    (last, error)
}

fn solve4(mut rows: Vec<[f64; 5]>) -> Option<f64> {
    let n = 4;
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))?;
        if rows[pivot][col] == 0.0 {
            return None;
        }
        rows.swap(col, pivot);
        for r in 0..n {
            if r != col {
                let f = rows[r][col] / rows[col][col];
                for k in col..=n {
                    rows[r][k] -= f * rows[col][k];
                }
            }
        }
    }
    Some(rows[0][n] / rows[0][0])
}

/// `λ₁(β, c)` for Couette flow at any admissible `c`: endpoint speeds go
/// through [`lambda_1_singular`], speeds outside [-1, 1] through
/// [`lambda_n_regular`].
pub fn couette_lambda1(beta: f64, c: f64, settings: &SolverSettings) -> Result<(f64, f64)> {
    if c == -1.0 || c == 1.0 {
        let side = if c < 0.0 { Side::Left } else { Side::Right };
        let s = lambda_1_singular(beta, side, &settings.eps_schedule, settings.resolution)?;
        Ok((s.value(), s.error_estimate()))
    } else {
        let spec = RayleighKuoSpec::couette(beta, c);
        if spec.profile.contains_speed(c) {
            return Err(KuoError::SingularSpeed { c, lo: -1.0, hi: 1.0 });
        }
        check_resolution(settings.resolution)?;
        let ext = extrapolated_eigenvalue(|y| spec.potential(y), 1, settings.resolution)?;
        Ok((ext.value, ext.error))
    }
}

/// Endpoint eigenvalue only, skipping the regularized certificate. Used inside
/// root searches where the certificate is already established.
pub fn couette_endpoint_lambda1(beta: f64, side: Side, resolution: usize) -> Result<(f64, f64)> {
    check_resolution(resolution)?;
    let c = side.speed();
    let ext = extrapolated_eigenvalue(
        |y| Ok(if beta == 0.0 { 0.0 } else { -beta / (y - c) }),
        1,
        resolution,
    )?;
    Ok((ext.value, ext.error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const QUARTER_PI2: f64 = PI * PI / 4.0;

    #[test]
    fn couette_without_rotation() {
        let pair = lambda_n_regular(&RayleighKuoSpec::couette(0.0, -2.0), 1, 256).unwrap();
        assert!((pair.value - QUARTER_PI2).abs() < 1e-6);
        assert!(pair.extrapolated);
    }

    #[test]
    fn potential_sign_moves_eigenvalue() {
        let below = lambda_n_regular(&RayleighKuoSpec::couette(1.0, -2.0), 1, 256).unwrap();
        let above = lambda_n_regular(&RayleighKuoSpec::couette(1.0, 2.0), 1, 256).unwrap();
        assert!(below.value < QUARTER_PI2);
        assert!(above.value > QUARTER_PI2);
    }

    #[test]
    fn speed_inside_range_is_rejected() {
        let err = lambda_n_regular(&RayleighKuoSpec::couette(1.0, 0.5), 1, 256).unwrap_err();
        assert!(matches!(err, KuoError::SingularSpeed { .. }));
        let err = lambda_n_regular(&RayleighKuoSpec::couette(1.0, -1.0), 1, 256).unwrap_err();
        assert!(matches!(err, KuoError::SingularSpeed { .. }));
    }

    #[test]
    fn singular_flag() {
        assert!(RayleighKuoSpec::couette(1.0, -1.0).singular);
        assert!(!RayleighKuoSpec::couette(1.0, -1.5).singular);
    }

    #[test]
    fn endpoint_without_rotation() {
        let s = lambda_1_singular(0.0, Side::Left, &default_eps_schedule(), 256).unwrap();
        assert!((s.value() - QUARTER_PI2).abs() < 1e-5);
    }

    #[test]
    fn endpoint_symmetry() {
        for beta in [0.5, 3.0] {
            let l = lambda_1_singular(beta, Side::Left, &default_eps_schedule(), 256).unwrap();
            let r = lambda_1_singular(-beta, Side::Right, &default_eps_schedule(), 256).unwrap();
            assert!((l.value() - r.value()).abs() < 1e-8);
        }
    }

    #[test]
    fn endpoint_wrong_sign() {
        let e = lambda_1_singular(-1.0, Side::Left, &default_eps_schedule(), 256).unwrap_err();
        assert!(matches!(e, KuoError::WrongSignBeta(_)));
        let e = lambda_1_singular(1.0, Side::Right, &default_eps_schedule(), 256).unwrap_err();
        assert!(matches!(e, KuoError::WrongSignBeta(_)));
    }

    #[test]
    fn short_schedule_rejected() {
        let e = lambda_1_singular(1.0, Side::Left, &[0.1, 0.05, 0.025], 256).unwrap_err();
        assert!(matches!(e, KuoError::InsufficientSequence { .. }));
    }

    #[test]
    fn regularized_limit_tracks_endpoint_value() {
        let s = lambda_1_singular(4.0, Side::Left, &default_eps_schedule(), 256).unwrap();
        assert!(s.regularized.windows(2).all(|w| w[1].1 < w[0].1));
        assert!((s.regularized_limit - s.value()).abs() < 1e-3);
    }

    #[test]
    fn scaled_flow_identity() {
        let a = 0.5;
        let beta = 1.3;
        let scaled = lambda_n_general(&ShearProfile::scaled(a), beta, -1.0, 1, 256).unwrap();
        let couette =
            lambda_n_regular(&RayleighKuoSpec::couette(beta / a, -1.0 / a), 1, 256).unwrap();
        assert!((scaled.value - couette.value).abs() < 1e-8);
    }

    #[test]
    fn general_path_matches_regular_path() {
        let g = lambda_n_general(&ShearProfile::couette(), 1.0, -3.0, 1, 256).unwrap();
        let r = lambda_n_regular(&RayleighKuoSpec::couette(1.0, -3.0), 1, 256).unwrap();
        assert!((g.value - r.value).abs() < 1e-10);
    }

    #[test]
    fn general_path_rejects_true_critical_layer() {
        let e = lambda_n_general(&ShearProfile::couette(), 1.0, 0.0, 1, 64).unwrap_err();
        assert!(matches!(e, KuoError::SingularPotential { .. }));
    }

    #[test]
    fn ground_state_vector_properties() {
        let pair = lambda_n_regular(&RayleighKuoSpec::couette(2.0, -1.5), 1, 128).unwrap();
        assert_eq!(pair.sign_changes(), 0);
        assert!((pair.grid.l2_norm(&pair.vector) - 1.0).abs() < 1e-12);
        assert!(pair.residual <= 1e-10);
    }
}
