use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Matqi(#[from] psc_matqi::Error),
    #[error(transparent)]
    Sdp(#[from] psc_sdp::Error),
    #[error(transparent)]
    Entropies(#[from] psc_entropies::Error),
    #[error("W is not swap-symmetric (residual {0:.3e})")]
    NotSymmetric(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("candidate is infeasible (worst slack {0:.3e})")]
    Infeasible(f64),
    #[error("dual SDP ended with status {status:?} (gap {gap:.2e})")]
    SdpFailure { status: psc_sdp::Status, gap: f64 },
    #[error("search size {0} exceeds the dense guard {1}")]
    Guard(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
