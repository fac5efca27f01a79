use psc_matqi::linalg::{self, CMat, CVec};
use psc_matqi::PureState;
use psc_sdp::{solve, Cmp, LExpr, SdpOptions, SdpProblem, Status};

use crate::{Error, Result};

/// A point (r, s, X) of the dual program
/// max δr − s s.t. r, s ≥ 0, X ⪰ 0 on G⊗E, rψ ≤ X⊗1 + s·1, Tr_G X ≤ 1.
#[derive(Debug, Clone)]
pub struct DualCandidate {
    pub r: f64,
    pub s: f64,
    pub x: CMat,
}

impl DualCandidate {
    pub fn zero(dim_ge: usize) -> Self {
        Self { r: 0.0, s: 0.0, x: linalg::zeros(dim_ge, dim_ge) }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DualCheck {
    pub feasible: bool,
    /// δr − s; a lower bound on 2^{−H^ε_min(G|E)} when feasible.
    pub value: f64,
    /// Smallest eigenvalue of X⊗1 + s·1 − rψ.
    pub operator_slack: f64,
    /// Smallest eigenvalue of 1 − Tr_G X.
    pub trace_slack: f64,
    /// Smallest eigenvalue of X.
    pub x_min_eig: f64,
}

pub const DUAL_TOL: f64 = 1e-8;

/// Evaluates a dual candidate for |ψ⟩ on G⊗E⊗E′ (in that order).
pub fn hmin_smooth_dual_value(psi: &CVec, dims: [usize; 3], delta: f64, cand: &DualCandidate) -> Result<DualCheck> {
    let [dg, de, de2] = dims;
    let n = dg * de * de2;
    if psi.len() != n || cand.x.nrows() != dg * de || cand.x.ncols() != dg * de {
        return Err(psc_matqi::Error::DimensionMismatch(format!("ψ of length {} and X of size {} on {dg}⊗{de}⊗{de2}", psi.len(), cand.x.nrows())).into());
    }
    let x = linalg::hermitize(&cand.x);
    let big = linalg::kron(&x, &linalg::eye(de2)) + linalg::eye(n) * linalg::r(cand.s) - linalg::proj(psi) * linalg::r(cand.r);
    let operator_slack = linalg::eigvalsh(&big)[0];
    let tg = linalg::ptrace(&x, &[dg, de], &[1]);
    let trace_slack = linalg::eigvalsh(&(linalg::eye(de) - tg))[0];
    let x_min_eig = linalg::eigvalsh(&x)[0];
    let feasible = cand.r >= -DUAL_TOL && cand.s >= -DUAL_TOL && operator_slack >= -DUAL_TOL && trace_slack >= -DUAL_TOL && x_min_eig >= -DUAL_TOL;
    Ok(DualCheck { feasible, value: delta * cand.r - cand.s, operator_slack, trace_slack, x_min_eig })
}

/// Same as [`hmin_smooth_dual_value`] for a labeled pure state.
pub fn hmin_smooth_dual_value_labeled(psi: &PureState, g: &str, e: &str, e2: &str, delta: f64, cand: &DualCandidate) -> Result<DualCheck> {
    let p = psi.reorder(&[g, e, e2])?;
    let d = p.dims();
    hmin_smooth_dual_value(p.vector(), [d[0], d[1], d[2]], delta, cand)
}

#[derive(Debug, Clone)]
pub struct PureSmoothSolution {
    /// Optimal Tr σ = 2^{−H^ε_min(G|E)}.
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub candidate: DualCandidate,
    pub rho: CMat,
    pub sigma: CMat,
}

impl PureSmoothSolution {
    pub fn entropy(&self) -> f64 {
        -self.primal.log2()
    }
}

/// Solves min Tr σ s.t. ρ ⪰ 0 on G⊗E⊗E′, Tr ρ ≤ 1, Tr ρψ ≥ δ, Tr_{E′} ρ ≤ 1_G⊗σ, and reads
/// the dual triple (r, s, X) off the multipliers.
pub fn pure_state_smooth_sdp(psi: &CVec, dims: [usize; 3], delta: f64) -> Result<PureSmoothSolution> {
    let [dg, de, de2] = dims;
    let n = dg * de * de2;
    if psi.len() != n {
        return Err(psc_matqi::Error::DimensionMismatch(format!("ψ of length {} on {dg}⊗{de}⊗{de2}", psi.len())).into());
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!("δ must lie in [0,1), got {delta}")));
    }
    let mut p = SdpProblem::new();
    let rho = p.herm_var(n);
    let sigma = p.herm_var(de);
    p.psd("ρ", rho.expr())?;
    let x_idx = p.psd("1⊗σ − Tr_E′ ρ", sigma.expr().kron_left_eye(dg).sub(&rho.expr().ptrace(&[dg, de, de2], &[0, 1])?)?)?;
    p.psd("σ", sigma.expr())?;
    let s_idx = p.constrain("Tr ρ ≤ 1", LExpr::constant(1.0) - rho.expr().trace(), Cmp::Geq, 0.0);
    let r_idx = p.constrain("Tr ρψ ≥ δ", rho.expr().re_inner(&linalg::proj(psi)), Cmp::Geq, delta);
    p.minimize(sigma.expr().trace());
    let sol = solve(&p, &SdpOptions::default())?;
    if sol.status != Status::Optimal {
        return Err(Error::SdpFailure { what: "pure-state smooth min-entropy", status: sol.status, gap: sol.gap });
    }
    let r = sol.lin_multipliers[r_idx].unwrap_or(0.0);
    let s = sol.lin_multipliers[s_idx].unwrap_or(0.0);
    let x = sol.lmi_multipliers[x_idx].clone();
    Ok(PureSmoothSolution {
        primal: sol.primal_value,
        dual: delta * r - s,
        gap: sol.gap,
        candidate: DualCandidate { r, s, x },
        rho: rho.value(&sol.y),
        sigma: sigma.value(&sol.y),
    })
}
