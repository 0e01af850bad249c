use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("tolerance {tol:e} not met within {steps} steps")]
    ToleranceNotMet { tol: f64, steps: usize },
    #[error("numerical abort at t = {t}: {reason}")]
    NumericalAbort { t: f64, reason: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 2 for a numerical abort, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericalAbort { .. } => 2,
            _ => 1,
        }
    }
}
