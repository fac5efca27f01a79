//! Quantum channels in Kraus form with lazily cached Choi matrices and
//! minimal Stinespring dilations, complementary channels, tensor powers,
//! and the erasure / dephasing / depolarizing / Schur-multiplier / constant zoo.

mod channel;
mod choi;
mod error;
pub mod spec;
pub mod zoo;

pub use channel::{apply, complementary, minimal_dilation, tensor, tensor_power, Channel, Dilation};
pub use choi::{choi, choi_apply, choi_apply_on_second, kraus_from_choi, ChoiMatrix};
pub use error::{Error, Result};
pub use spec::{parse_channel_spec, ChannelSpec};
pub use zoo::{make_channel, Zoo};

/// Cutoff for Choi ranks and output supports, relative to the spectral norm.
pub const RANK_CUTOFF: f64 = 1e-9;
