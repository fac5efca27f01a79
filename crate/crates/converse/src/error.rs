use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Matqi(#[from] psc_matqi::Error),
    #[error(transparent)]
    Sdp(#[from] psc_sdp::Error),
    #[error(transparent)]
    Channels(#[from] psc_channels::Error),
    #[error(transparent)]
    Entropies(#[from] psc_entropies::Error),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{what} SDP ended with status {status:?} (gap {gap:.2e})")]
    SdpFailure { what: &'static str, status: psc_sdp::Status, gap: f64 },
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("degenerate sample: t_Q = {0:.3e} after {1} draws")]
    DegenerateSample(f64, usize),
    #[error("input is not permutation invariant (deviation {0:.3e})")]
    NotPermutationInvariant(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
