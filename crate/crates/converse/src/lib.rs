//! Finite-blocklength converse bounds and the numerical objects around them:
//! private-code metrics, the optimal decoder SDP, one-shot decoupling trials
//! and the post-selection dominance check.

pub mod bounds;
pub mod decoder;
pub mod decoupling;
pub mod definetti;
mod error;
pub mod private;
pub mod rates;

pub use bounds::{
    mu_for_input, thm1_bound, thm2_bound, thm3_bound, thm3_bound_with, weak_bound, BoundKind, ConverseBoundReport, MuConvention, MuReport,
    Term, THM3_C0,
};
pub use decoder::{embedded_max_entangled, optimal_decoder_fidelity, DecoderResult};
pub use decoupling::{berta_average, decoupling_trial, prop4_rank, BertaEstimate, DecouplingSetup, DecouplingTrialResult};
pub use definetti::{definetti_dominance, definetti_dominance_pure, post_selection_state, DominanceCheck};
pub use error::{Error, Result};
pub use private::{private_code_metrics, PrivateCode, PrivateMetrics};
pub use rates::{dephasing_assisted_rates, ideal_fidelity, ppt_error_bound};
