use psc_matqi::linalg::{self, r, CMat};
use psc_matqi::symmetric_projector;
use serde::Serialize;

use crate::{Error, Result};

/// Largest deviation from permutation invariance accepted.
pub const INVARIANCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DominanceCheck {
    /// Smallest eigenvalue of prefactor·ω − ρ̄.
    pub min_eigenvalue: f64,
    pub prefactor: f64,
    pub invariance_residual: f64,
}

/// max over adjacent transpositions π of ‖πρπ† − ρ‖_max.
pub fn invariance_residual(rho: &CMat, d: usize, n: usize) -> f64 {
    let dims = vec![d; n];
    (0..n.saturating_sub(1))
        .map(|k| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(k, k + 1);
            linalg::max_abs(&(linalg::permute_op(rho, &dims, &perm) - rho))
        })
        .fold(0.0, f64::max)
}

fn check(rho: &CMat, d: usize, n: usize) -> Result<f64> {
    let total = (0..n).try_fold(1usize, |t, _| t.checked_mul(d)).unwrap_or(usize::MAX);
    if d == 0 || n == 0 || rho.nrows() != total || rho.ncols() != total {
        return Err(psc_matqi::Error::DimensionMismatch(format!("operator of size {} on ({d})^⊗{n}", rho.nrows())).into());
    }
    let res = invariance_residual(rho, d, n);
    if res > INVARIANCE_TOL {
        return Err(Error::NotPermutationInvariant(res));
    }
    Ok(res)
}

/// ω = ∫dσ σ^{⊗n}, realized as Tr_{H′^n} P_Sym/dim Sym on (H⊗H′)^{⊗n}.
pub fn post_selection_state(d: usize, n: usize) -> Result<CMat> {
    let (p, dim) = symmetric_projector(d * d, n)?;
    let dims = vec![d; 2 * n];
    let keep: Vec<usize> = (0..n).map(|k| 2 * k).collect();
    Ok(linalg::ptrace(&p, &dims, &keep) * r(1.0 / dim as f64))
}

/// min eig(n^{d²}·ω − ρ̄) with ω = Tr_{H′^n} P_Sym/dim Sym on (H⊗H′)^{⊗n}.
pub fn definetti_dominance(rho_bar: &CMat, d: usize, n: usize) -> Result<DominanceCheck> {
    let invariance_residual = check(rho_bar, d, n)?;
    let omega = post_selection_state(d, n)?;
    let prefactor = (n as f64).powi((d * d) as i32);
    let gap = omega * r(prefactor) - rho_bar;
    let min_eigenvalue = linalg::eigvalsh(&linalg::hermitize(&gap))[0];
    Ok(DominanceCheck { min_eigenvalue, prefactor, invariance_residual })
}

/// min eig(n^d·P_Sym/dim Sym − ρ̄) for ρ̄ supported on the symmetric subspace.
pub fn definetti_dominance_pure(rho_bar: &CMat, d: usize, n: usize) -> Result<DominanceCheck> {
    let invariance_residual = check(rho_bar, d, n)?;
    let (p, dim) = symmetric_projector(d, n)?;
    let prefactor = (n as f64).powi(d as i32);
    let gap = p * r(prefactor / dim as f64) - rho_bar;
    let min_eigenvalue = linalg::eigvalsh(&linalg::hermitize(&gap))[0];
    Ok(DominanceCheck { min_eigenvalue, prefactor, invariance_residual })
}
