//! Spectral toolkit for Couette-type shear flows on the β-plane.
//!
//! * [`grid`] and [`tridiag`]: finite-difference operators on [-1, 1] and a
//!   Sturm-sequence eigensolver with Richardson extrapolation.
//! * [`rayleigh_kuo`]: the Rayleigh–Kuo eigenproblem `λₙ(β, c)` for regular
//!   and endpoint wave speeds.
//! * [`atlas`]: the transition value β*, borderline curves and the (α, β)
//!   region classification for traveling waves near Couette flow.
//! * [`modified_flow`]: cut-off shear profiles `U_{γ,a}` whose principal
//!   eigenvalue can be tuned through zero.
//! * [`bifurcation`]: first-order bifurcated waves and their steady-state
//!   residual.
//! * [`damping`]: linearized per-mode vorticity dynamics in sheared
//!   coordinates and velocity decay rates.

pub mod atlas;
pub mod bifurcation;
pub mod damping;
pub mod error;
pub mod fit;
pub mod grid;
pub mod modified_flow;
pub mod quadrature;
pub mod rayleigh_kuo;
pub mod roots;
pub mod table;
pub mod tridiag;

pub use error::{ErrorClass, KuoError, Result};
pub use grid::{assemble, build_grid, rayleigh_quotient, Grid1D, GridKind, TridiagOperator};
pub use rayleigh_kuo::{
    lambda_1_singular, lambda_n_general, lambda_n_regular, RayleighKuoSpec, ShearProfile, Side,
    SolverSettings,
};
pub use table::CurveTable;
pub use tridiag::{eigenvector, extrapolate, nth_eigenvalue, EigenPair};
