use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("zero input: {0}")]
    ZeroInput(&'static str),
    #[error("non-finite value at sample {0}")]
    NonFinite(usize),
    #[error("shift is not grid-aligned: {0}")]
    NotGridAligned(String),
    #[error("window must be real-valued")]
    NonRealWindow,
    #[error("negative density value at index {0}")]
    NegativeDensity(usize),
    #[error("malformed dump: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
