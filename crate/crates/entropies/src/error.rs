use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Matqi(#[from] psc_matqi::Error),
    #[error(transparent)]
    Sdp(#[from] psc_sdp::Error),
    #[error(transparent)]
    Channels(#[from] psc_channels::Error),
    #[error("SDP for {what} ended with status {status:?} (gap {gap:.2e})")]
    SdpFailure { what: &'static str, status: psc_sdp::Status, gap: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("state must be normalized")]
    NotNormalized,
}

pub type Result<T> = std::result::Result<T, Error>;
