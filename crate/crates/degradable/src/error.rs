use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Matqi(#[from] psc_matqi::Error),
    #[error(transparent)]
    Sdp(#[from] psc_sdp::Error),
    #[error(transparent)]
    Channels(#[from] psc_channels::Error),
    #[error("slack SDP for the {what} map ended with status {status:?} (gap {gap:.2e})")]
    SdpFailure { what: &'static str, status: psc_sdp::Status, gap: f64 },
    #[error("W = VU factorization residual {0:.3e} is too large")]
    Factorization(f64),
    #[error("X_F is not an involution (deviation {0:.3e})")]
    NotInvolution(f64),
    #[error("dilation is not of type I: X_F is not ±1 (deviation {0:.3e})")]
    NotTypeI(f64),
    #[error("test state has Schmidt rank {rank}, need {need}")]
    RankDeficient { rank: usize, need: usize },
    #[error("state is not supported on the extracted subspace (residual {0:.3e})")]
    SupportMismatch(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
