use thiserror::Error;

/// Errors raised by selection, fitting and study orchestration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate estimate: {0}")]
    DegenerateEstimate(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse { row: usize, column: usize, message: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code: 3 for numeric trouble, 2 for everything the caller got wrong.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) | Error::DegenerateEstimate(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
