//! Search harness for the dual smooth min-entropy program on states with a
//! swap symmetry at every site: construction of the states, evaluation and
//! solution of dual candidates, and permutation averaging.

pub mod dual;
mod error;
pub mod state;

pub use dual::{
    commutant_residual, dual_bound, make_feasible, primal_value, search, solve_dual, symmetry_reduce, DualSolution, Reduction, SearchReport,
    SEARCH_GUARD,
};
pub use error::{Error, Result};
pub use psc_entropies::dual::{DualCandidate, DualCheck};
pub use state::{build_multisymmetric, from_extraction, swap_sign, MultiSymmetricState, SYMMETRY_TOL};
