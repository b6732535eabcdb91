use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GasError {
    /// A physical quantity left its admissible domain (non-positive density, projective singularity, ...).
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    /// The requested law, invariant set or scheme does not exist for the given (n, gamma, entropy) case.
    #[error("not applicable: {0}")]
    Applicability(String),
    #[error("singular constraint: {0}")]
    SingularConstraint(String),
    #[error("step failed after {iterations} iterations (residual {residual:e}): {reason}")]
    StepFailure {
        reason: String,
        iterations: usize,
        residual: f64,
    },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = GasError> = std::result::Result<T, E>;

impl From<std::io::Error> for GasError {
    fn from(e: std::io::Error) -> Self {
        GasError::Io(e.to_string())
    }
}

impl From<csv::Error> for GasError {
    fn from(e: csv::Error) -> Self {
        GasError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for GasError {
    fn from(e: serde_json::Error) -> Self {
        GasError::Io(e.to_string())
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> GasError {
    GasError::Domain(msg.into())
}

pub(crate) fn argument(msg: impl Into<String>) -> GasError {
    GasError::Argument(msg.into())
}

pub(crate) fn not_applicable(msg: impl Into<String>) -> GasError {
    GasError::Applicability(msg.into())
}
