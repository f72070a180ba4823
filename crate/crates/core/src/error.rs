use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Space parameter outside the open interval (0, 1).
    #[error("space parameter s = {0} must lie in (0, 1)")]
    InvalidSpaceParam(f64),

    #[error("index {index} exceeds truncation order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    /// Inner products between elements of different spaces.
    #[error("elements belong to different spaces (s = {0} and s = {1})")]
    MismatchedSpace(f64, f64),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix dimensions do not match: {0}")]
    Shape(String),

    #[error("eigen-solver did not converge")]
    NoConvergence,

    /// A closed-form prediction was requested for inputs that do not meet
    /// its hypothesis.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
