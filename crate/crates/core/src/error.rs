use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the Gamma function at x = {x}")]
    Pole { x: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("fractional order {alpha} is not admissible (must be positive, finite and non-integer)")]
    InvalidOrder { alpha: f64 },

    #[error("{what} did not reach the requested tolerance (estimate {estimate:e})")]
    NonConvergence { what: &'static str, estimate: f64 },

    #[error("value is outside the domain of {what}: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("fractional derivative of order {order} of basis function {index} is unbounded at t0")]
    SingularDerivativeAtT0 { index: usize, order: f64 },

    #[error("coefficient overflow while building basis function {index}")]
    Overflow { index: usize },

    #[error("basis matrix is numerically singular (reciprocal condition {rcond:e})")]
    SingularBasisMatrix { rcond: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("discrete system is numerically singular (reciprocal condition {rcond:e})")]
    SingularSystem { rcond: f64 },

    #[error("Newton iteration failed after {iterations} iterations (residual {residual:e})")]
    NewtonDivergence { iterations: usize, residual: f64 },

    #[error("Newton iterate left the domain of K and damping could not restore it")]
    DomainViolation,

    #[error("reference series did not drop below tolerance after {terms} terms")]
    SeriesStagnation { terms: usize },

    #[error("grids are not compatible: {0}")]
    GridMismatch(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
