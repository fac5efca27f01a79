//! Dense complex linear algebra for finite-dimensional quantum information:
//! labelled density operators, fidelity-type distances, partial traces,
//! symmetric-subspace projectors and seeded Haar sampling.

pub mod error;
pub mod haar;
pub mod labels;
pub mod linalg;
pub mod metrics;
pub mod state;
pub mod sym;

pub use error::{Error, Result};
pub use haar::{haar_projector, haar_sample, haar_state, haar_unitary, random_density, rng_from_seed, HaarKind, HaarSample};
pub use labels::SystemLabel;
pub use linalg::{CMat, CVec, C64};
pub use metrics::{fidelity, generalized_inverse_lognorm, purified_distance, trace_distance};
pub use state::{partial_trace, DensityOperator, Isometry, PureState};
pub use sym::symmetric_projector;

/// Hermiticity / positivity tolerance, relative to the spectral norm.
pub const TOL: f64 = 1e-9;
/// Relative eigenvalue cutoff for square roots, supports and generalized inverses.
pub const EIG_CUTOFF: f64 = 1e-10;
/// Largest total Hilbert-space dimension stored densely.
pub const MAX_DIM: usize = 4096;
