use thiserror::Error;

/// Failures surfaced by the spectral toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KuoError {
    #[error("invalid-count: a grid needs at least 3 interior nodes, got {0}")]
    InvalidCount(usize),
    #[error("invalid-ratio: grade ratio must lie in (0,1), got {0}")]
    InvalidRatio(f64),
    #[error("non-finite-potential: Q({y}) = {value}")]
    NonFinitePotential { y: f64, value: f64 },
    #[error("zero-vector: Rayleigh quotient of the zero vector")]
    ZeroVector,
    #[error("index-out-of-range: eigenvalue index {index} not in 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("no-convergence: {0}")]
    NoConvergence(String),
    #[error("insufficient-sequence: extrapolation needs at least {needed} entries, got {got}")]
    InsufficientSequence { needed: usize, got: usize },
    #[error("singular-speed: c = {c} lies in the flow range [{lo}, {hi}] (essential spectrum)")]
    SingularSpeed { c: f64, lo: f64, hi: f64 },
    #[error("wrong-sign-beta: {0}")]
    WrongSignBeta(String),
    #[error("non-monotone-sequence: {0}")]
    NonMonotoneSequence(String),
    #[error("singular-potential: u({y}) - c = {gap} with non-vanishing numerator")]
    SingularPotential { y: f64, gap: f64 },
    #[error("bracket-failure: {0}")]
    BracketFailure(String),
    #[error("below-threshold: beta = {beta} is below beta_* = {beta_star}")]
    BelowThreshold { beta: f64, beta_star: f64 },
    #[error("out-of-range-lambda: {0}")]
    OutOfRangeLambda(String),
    #[error("invariant-violation: {0}")]
    InvariantViolation(String),
    #[error("no-bracket: {0}")]
    NoBracket(String),
    #[error("positive-eigenvalue: principal eigenvalue {0} is not negative, no bifurcation point")]
    PositiveEigenvalue(f64),
    #[error("degenerate-eigenvalue: {0}")]
    DegenerateEigenvalue(String),
    #[error("zero-wavenumber: k must be nonzero")]
    ZeroWavenumber,
    #[error("invalid-argument: {0}")]
    InvalidArgument(String),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    NonConvergence,
    Bracket,
}

impl KuoError {
    pub fn class(&self) -> ErrorClass {
        use KuoError::*;
        match self {
            NoConvergence(_) | NonMonotoneSequence(_) | SingularPotential { .. } => {
                ErrorClass::NonConvergence
            }
            BracketFailure(_) | NoBracket(_) => ErrorClass::Bracket,
            _ => ErrorClass::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, KuoError>;
