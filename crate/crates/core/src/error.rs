use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("potential is singular at x = 0 when Re(eps) = {0} < 0")]
    Singularity(f64),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("singular pivot at row {row} (|pivot| = {magnitude:e}); perturb the shift")]
    SingularPivot { row: usize, magnitude: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("secant iteration did not converge after {iterations} iterations (last iterate {last})")]
    SecantFailed { last: Complex64, iterations: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no merge: {0}")]
    NoMerge(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
