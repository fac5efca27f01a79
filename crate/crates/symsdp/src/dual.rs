use psc_entropies::dual::{hmin_smooth_dual_value, DualCandidate, DualCheck};
use psc_entropies::minmax::hmin_smooth_raw;
use psc_matqi::linalg::{self, r, CMat};
use psc_sdp::{invariant_hermitian_basis, solve, Cmp, MExpr, SdpOptions, SdpProblem, Status};
use serde::Serialize;

use crate::state::MultiSymmetricState;
use crate::{Error, Result};

/// Largest ψ dimension handed to the dense dual solver.
pub const SEARCH_GUARD: usize = 512;

/// Feasibility, value δr − s and slacks of a dual triple for this state.
pub fn dual_bound(state: &MultiSymmetricState, delta: f64, cand: &DualCandidate) -> Result<DualCheck> {
    Ok(hmin_smooth_dual_value(&state.psi, state.dims(), delta, cand)?)
}

/// 2^{−H^ε′_min(G^n|E^n)} with δ = 1 − ε′², from the primal smoothing SDP on ψ^{G^n E^n}.
pub fn primal_value(state: &MultiSymmetricState, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let [g, e, _] = state.dims();
    let h = hmin_smooth_raw(&state.marginal_ge(), g, e, (1.0 - delta).sqrt())?;
    Ok((-h.value).exp2())
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("δ must lie in (0,1), got {delta}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Reduction {
    None,
    /// X restricted to the commutant of the site permutations that fix ψ.
    Permutations,
}

#[derive(Debug, Clone)]
pub struct DualSolution {
    pub candidate: DualCandidate,
    pub value: f64,
    pub gap: f64,
    /// Number of real parameters in X.
    pub x_params: usize,
}

/// Solves max δr − s over r, s ≥ 0, X ⪰ 0, rψ ⪯ X⊗1 + s·1, Tr_{G^n} X ⪯ 1.
pub fn solve_dual(state: &MultiSymmetricState, delta: f64, reduction: Reduction) -> Result<DualSolution> {
    check_delta(delta)?;
    let [g, e, e2] = state.dims();
    let total = g * e * e2;
    if total > SEARCH_GUARD {
        return Err(Error::Guard(total, SEARCH_GUARD));
    }
    let dx = g * e;
    let mut p = SdpProblem::new();
    let x = match reduction {
        Reduction::None => p.herm_var(dx),
        Reduction::Permutations => p.herm_var_with_basis(dx, invariant_hermitian_basis(dx, &state.permutation_stabilizer())),
    };
    let rv = p.scalar_var();
    let sv = p.scalar_var();
    p.constrain("r ≥ 0", rv.expr(), Cmp::Geq, 0.0);
    p.constrain("s ≥ 0", sv.expr(), Cmp::Geq, 0.0);
    p.psd("X", x.expr())?;
    let op = x
        .expr()
        .kron_right_eye(e2)
        .add(&MExpr::from_lexpr(&sv.expr()).kron_left_eye(total))?
        .sub(&MExpr::from_lexpr(&rv.expr()).kron_left(&linalg::proj(&state.psi)))?;
    p.psd("X⊗1 + s − rψ", op)?;
    p.psd("1 − Tr_G X", MExpr::identity(e).sub(&x.expr().ptrace(&[g, e], &[1])?)?)?;
    p.maximize(rv.expr().scale(delta) - sv.expr());
    let sol = solve(&p, &SdpOptions::default())?;
    if sol.status != Status::Optimal {
        return Err(Error::SdpFailure { status: sol.status, gap: sol.gap });
    }
    let candidate = DualCandidate { r: rv.value(&sol.y), s: sv.value(&sol.y), x: x.value(&sol.y) };
    let candidate = make_feasible(state, &candidate)?;
    Ok(DualSolution { value: delta * candidate.r - candidate.s, candidate, gap: sol.gap, x_params: x.len() })
}

/// Moves a nearly feasible triple into the feasible set: clip X ⪰ 0, raise s to cover the
/// operator constraint, then scale (r, s, X) so that Tr_G X ⪯ 1.
pub fn make_feasible(state: &MultiSymmetricState, cand: &DualCandidate) -> Result<DualCandidate> {
    let [g, e, e2] = state.dims();
    if cand.x.nrows() != g * e {
        return Err(Error::Shape(format!("X of size {} on G^n E^n of size {}", cand.x.nrows(), g * e)));
    }
    let x = linalg::funm(&cand.x, |v| v.max(0.0));
    let rr = cand.r.max(0.0);
    let big = linalg::kron(&x, &linalg::eye(e2)) - linalg::proj(&state.psi) * r(rr);
    let s = cand.s.max(0.0).max(-linalg::eigvalsh(&big)[0]);
    let top = linalg::eigvalsh(&linalg::ptrace(&x, &[g, e], &[1])).last().copied().unwrap_or(0.0);
    let k = if top > 1.0 { 1.0 / top } else { 1.0 };
    Ok(DualCandidate { r: rr * k, s: s * k, x: x * r(k) })
}

fn worst_slack(c: &DualCheck) -> f64 {
    c.operator_slack.min(c.trace_slack).min(c.x_min_eig)
}

/// Averages X over the site permutations fixing ψ; r and s are kept.
pub fn symmetry_reduce(cand: &DualCandidate, state: &MultiSymmetricState) -> Result<DualCandidate> {
    let check = hmin_smooth_dual_value(&state.psi, state.dims(), 0.5, cand)?;
    if !check.feasible {
        return Err(Error::Infeasible(worst_slack(&check)));
    }
    let group = state.permutation_stabilizer();
    let dx = cand.x.nrows();
    let mut acc = linalg::zeros(dx, dx);
    for g in &group {
        acc += CMat::from_fn(dx, dx, |i, j| cand.x[(g[i], g[j])]);
    }
    Ok(DualCandidate { r: cand.r, s: cand.s, x: acc * r(1.0 / group.len() as f64) })
}

/// max over the stabilizer of ‖P_π X P_π† − X‖_max.
pub fn commutant_residual(x: &CMat, state: &MultiSymmetricState) -> f64 {
    let n = x.nrows();
    state
        .permutation_stabilizer()
        .iter()
        .map(|g| linalg::max_abs(&(CMat::from_fn(n, n, |i, j| x[(g[i], g[j])]) - x)))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub delta: f64,
    pub dim_g: usize,
    pub dim_e: usize,
    pub symmetry_residual: f64,
    /// 2^{−H^ε′_min} from the primal smoothing SDP.
    pub primal: f64,
    /// Best feasible δr − s among the pool and the reduced dual optimum.
    pub best_dual: f64,
    pub reduced_dual: f64,
    pub reduced_params: usize,
    pub pool_values: Vec<Option<f64>>,
    /// −log(best_dual)/√n, the exponent the open problem asks to keep bounded.
    pub exponent_per_sqrt_n: f64,
}

/// Evaluates a candidate pool together with the permutation-reduced dual optimum.
pub fn search(state: &MultiSymmetricState, delta: f64, pool: &[DualCandidate]) -> Result<SearchReport> {
    let primal = primal_value(state, delta)?;
    let reduced = solve_dual(state, delta, Reduction::Permutations)?;
    let pool_values = pool
        .iter()
        .map(|c| Ok(dual_bound(state, delta, c)?).map(|chk: DualCheck| chk.feasible.then_some(chk.value)))
        .collect::<Result<Vec<_>>>()?;
    let best_dual = pool_values.iter().flatten().copied().fold(reduced.value, f64::max);
    Ok(SearchReport {
        n: state.n,
        delta,
        dim_g: state.dim_g,
        dim_e: state.dim_e,
        symmetry_residual: state.symmetry_residual(),
        primal,
        best_dual,
        reduced_dual: reduced.value,
        reduced_params: reduced.x_params,
        pool_values,
        exponent_per_sqrt_n: -best_dual.log2() / (state.n as f64).sqrt(),
    })
}
