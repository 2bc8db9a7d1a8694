use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GciError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("pole at origin: {0}")]
    PoleAtOrigin(String),
    #[error("pole in parameters: {0}")]
    PoleInParameters(String),
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("inadmissible field: {0}")]
    Inadmissible(String),
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),
    #[error("not symmetrizable: {0}")]
    NotSymmetrizable(String),
}

impl GciError {
    /// Process exit code: 2 for usage problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            GciError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, GciError>;
