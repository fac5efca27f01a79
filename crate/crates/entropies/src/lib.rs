//! Entropic quantities: von Neumann entropies and coherent information, the
//! single-letter coherent information Q1, conditional min- and max-entropies
//! (exact and smoothed, computed by SDP), the dual of the smooth min-entropy
//! for pure states, AEP bounds and typical projectors.

pub mod aep;
pub mod dual;
mod error;
pub mod lemmas;
pub mod minmax;
pub mod q1;
pub mod vn;



pub use dual::{hmin_smooth_dual_value, pure_state_smooth_sdp, DualCandidate, DualCheck, PureSmoothSolution};
pub use q1::{q1, Q1Options, Q1Result};
pub use aep::{aep_bound, hmax_smooth_iid, hmin_smooth_iid, typical_projector, AepParams, AepSide, Sign};
pub use error::{Error, Result};
pub use minmax::{hmax, hmax_smooth, hmin, hmin_smooth, EntropyQuery, SdpEntropy};

pub use vn::{coherent_information, conditional_entropy, von_neumann};
