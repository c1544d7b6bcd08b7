use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("dimension mismatch: expected {expected} modes, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("no single phase correction restores pattern {pattern:?} (fidelity {fidelity})")]
    CorrectionFailed { pattern: Vec<u32>, fidelity: f64 },
    #[error("target {target} unreachable with resource size up to {n_max}")]
    Unreachable { target: f64, n_max: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
