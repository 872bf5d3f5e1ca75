use thiserror::Error;

/// Errors raised by the toolkit. Protocol aborts and decoding failures are
/// ordinary results, not errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operation is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("measurement set violates completeness (deviation {0:.3e})")]
    IncompleteMeasurement(f64),

    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("iteration did not converge after {iterations} iterations (best value {best})")]
    Convergence { iterations: usize, best: f64 },

    #[error("code error: {0}")]
    Code(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
