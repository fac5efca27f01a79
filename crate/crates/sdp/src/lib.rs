//! Semidefinite programs over complex Hermitian matrices.
//!
//! Problems are written in affine form: real scalar unknowns `y` (usually
//! grouped into Hermitian or rectangular complex matrix variables), a linear
//! objective, affine Hermitian expressions constrained to be PSD, and scalar
//! affine constraints. The solver is a primal-dual infeasible interior point
//! method with Mehrotra predictor-corrector steps.

mod dump;
mod error;
mod expr;
mod problem;
mod solver;
mod sparse;
mod verify;

pub use dump::dump_json;
pub use error::{Error, Result};
pub use expr::{complex_basis, hermitian_basis, invariant_complex_basis, invariant_hermitian_basis, HermVar, LExpr, MExpr, MatVar, ScalarVar};
pub use problem::{Cmp, Sense, SdpProblem};
pub use solver::{solve, Certificate, SdpOptions, SdpSolution, Status};
pub use sparse::SpMat;
pub use verify::{verify, Residuals};
