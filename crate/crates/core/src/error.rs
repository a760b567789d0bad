use thiserror::Error;

/// Errors raised by library operations.
///
/// `Input` covers malformed data (out-of-range ids, duplicates, bad
/// notation). Verification failures are never errors; they are reported in
/// the result types.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("scale cap exceeded: {0}")]
    ScaleCap(String),
    #[error("no construction available: {0}")]
    Unavailable(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
