use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cost guard exceeded: {what} = {value} (limit {limit})")]
    CostGuard {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("numerical failure: {what} (worst deviation {worst:e})")]
    Numerical { what: &'static str, worst: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
