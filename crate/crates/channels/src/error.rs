use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Matqi(#[from] psc_matqi::Error),
    #[error("Kraus operators are not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),
    #[error("Choi matrix violates the trace condition (deviation {0:.3e})")]
    ChoiTrace(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed channel spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
