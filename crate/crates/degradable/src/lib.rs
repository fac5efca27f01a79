//! Degradability certificates (slack SDPs for a degrading and an anti-degrading map) and the
//! constructive dilations of degradable channels: the SWAP-symmetrized dilation, the type-I
//! lift N ⊗ τ, and extraction of the associated symmetric channel.

mod certify;
mod dilation;
mod error;
mod extract;
mod lift;

pub use certify::{certify_degradability, compose_choi, fit_post_processing, DegradabilityCertificate, SlackFit, Verdict, NO_SLACK, YES_SLACK};
pub use dilation::{
    coherent_information_via_degrading, degradable_identity, schur_direct_dilation, symmetrized_dilation, IdentityCheck, TypeIDilation,
    FACTOR_TOL,
};
pub use error::{Error, Result};
pub use extract::{decompose_via_symmetric, extract_symmetric_channel, Decomposition, SymmetricExtraction};
pub use lift::{type_i_lift, TypeILift};
