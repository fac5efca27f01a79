use psc_matqi::linalg::{self, r, CMat};
use psc_matqi::{DensityOperator, PureState};
use psc_sdp::{solve, Cmp, LExpr, MExpr, SdpOptions, SdpProblem, SpMat, Status};

use crate::{Error, Result};

/// Largest A⊗B dimension accepted by the generic (unreduced) SDP paths.
pub const MAX_SDP_DIM: usize = 128;

/// Which part of a state an entropy refers to: H(A|B) with smoothing ε.
#[derive(Debug, Clone)]
pub struct EntropyQuery {
    pub state: DensityOperator,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub eps: f64,
}

impl EntropyQuery {
    pub fn new(state: DensityOperator, a: &[&str], b: &[&str], eps: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::InvalidParameter(format!("smoothing must lie in [0,1), got {eps}")));
        }
        if a.is_empty() {
            return Err(Error::InvalidParameter("empty target system".into()));
        }
        for x in a.iter().chain(b) {
            state.label_positions(&[x])?;
        }
        if a.iter().any(|x| b.contains(x)) {
            return Err(Error::InvalidParameter("target and conditioning systems overlap".into()));
        }
        Ok(Self { state, a: a.iter().map(|s| s.to_string()).collect(), b: b.iter().map(|s| s.to_string()).collect(), eps })
    }

    pub fn pure(psi: &PureState, a: &[&str], b: &[&str], eps: f64) -> Result<Self> {
        Self::new(psi.density(), a, b, eps)
    }

    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        let a: Vec<&str> = self.a.iter().map(|s| s.as_str()).collect();
        let b: Vec<&str> = self.b.iter().map(|s| s.as_str()).collect();
        Self::new(self.state.clone(), &a, &b, eps)
    }

    /// ρ^{AB} with A factors first, and the dimensions of A and B.
    pub fn reduced(&self) -> Result<(CMat, usize, usize)> {
        let ab: Vec<&str> = self.a.iter().chain(&self.b).map(|s| s.as_str()).collect();
        let red = self.state.partial_trace(&ab)?.reorder(&ab)?;
        let dims = red.dims();
        let da: usize = dims[..self.a.len()].iter().product();
        let db: usize = dims[self.a.len()..].iter().product();
        Ok((red.into_matrix(), da, db))
    }
}

/// An entropy value together with the SDP diagnostics behind it.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SdpEntropy {
    pub value: f64,
    /// Relative primal/dual gap of the underlying SDP.
    pub gap: f64,
    pub iterations: usize,
}

pub fn hmin(q: &EntropyQuery) -> Result<SdpEntropy> {
    let (rho, da, db) = q.reduced()?;
    hmin_raw(&rho, da, db)
}

pub fn hmax(q: &EntropyQuery) -> Result<SdpEntropy> {
    let (rho, da, db) = q.reduced()?;
    hmax_raw(&rho, da, db)
}

pub fn hmin_smooth(q: &EntropyQuery) -> Result<SdpEntropy> {
    let (rho, da, db) = q.reduced()?;
    hmin_smooth_raw(&rho, da, db, q.eps)
}

pub fn hmax_smooth(q: &EntropyQuery) -> Result<SdpEntropy> {
    let (rho, da, db) = q.reduced()?;
    hmax_smooth_raw(&rho, da, db, q.eps)
}

fn guard(rho: &CMat, da: usize, db: usize) -> Result<()> {
    if rho.nrows() != da * db || rho.ncols() != da * db {
        return Err(psc_matqi::Error::DimensionMismatch(format!("{}x{} operator on {da}⊗{db}", rho.nrows(), rho.ncols())).into());
    }
    if da * db > MAX_SDP_DIM {
        return Err(psc_matqi::Error::DimensionGuard(da * db).into());
    }
    linalg::check_psd(rho)?;
    let t = linalg::trace(rho).re;
    if t > 1.0 + psc_matqi::TOL {
        return Err(psc_matqi::Error::TraceTooLarge(t).into());
    }
    if t <= 1e-14 {
        return Err(psc_matqi::Error::ZeroOperator.into());
    }
    Ok(())
}

fn finish(what: &'static str, p: &SdpProblem) -> Result<(f64, SdpEntropyRaw)> {
    let s = solve(p, &SdpOptions::default())?;
    if s.status != Status::Optimal {
        return Err(Error::SdpFailure { what, status: s.status, gap: s.gap });
    }
    Ok((s.primal_value, SdpEntropyRaw { gap: s.gap, iterations: s.iterations, y: s.y }))
}

struct SdpEntropyRaw {
    gap: f64,
    iterations: usize,
    #[allow(dead_code)]
    y: Vec<f64>,
}

fn neg_log(what: &'static str, v: f64, raw: SdpEntropyRaw) -> Result<SdpEntropy> {
    if v <= 0.0 {
        return Err(Error::SdpFailure { what, status: Status::Optimal, gap: raw.gap });
    }
    Ok(SdpEntropy { value: -v.log2(), gap: raw.gap, iterations: raw.iterations })
}

/// H_min(A|B) of an operator on A⊗B: −log min{Tr σ : ρ ≤ 1⊗σ}.
pub fn hmin_raw(rho: &CMat, da: usize, db: usize) -> Result<SdpEntropy> {
    guard(rho, da, db)?;
    let mut p = SdpProblem::new();
    let sigma = p.herm_var(db);
    p.psd("1⊗σ−ρ", sigma.expr().kron_left_eye(da).sub(&MExpr::constant(rho))?)?;
    p.minimize(sigma.expr().trace());
    let (v, raw) = finish("min-entropy", &p)?;
    neg_log("min-entropy", v, raw)
}

/// H_max(A|B) = −H_min(A|C) on the canonical purification.
pub fn hmax_raw(rho: &CMat, da: usize, db: usize) -> Result<SdpEntropy> {
    guard(rho, da, db)?;
    let (rac, rc) = complement_marginal(rho, da, db);
    let h = hmin_raw(&rac, da, rc)?;
    Ok(SdpEntropy { value: -h.value, ..h })
}

/// ψ^{AC} for the canonical purification |ψ⟩^{ABC} of ρ^{AB}, and |C|.
pub fn complement_marginal(rho: &CMat, da: usize, db: usize) -> (CMat, usize) {
    let (v, rc) = linalg::purify(rho);
    (linalg::ptrace_pure(&v, &[da, db, rc], &[0, 2]), rc)
}

/// H_max(A|B) = log max_σ F(ρ, 1⊗σ)², computed directly from a fidelity block.
pub fn hmax_fidelity_raw(rho: &CMat, da: usize, db: usize) -> Result<SdpEntropy> {
    guard(rho, da, db)?;
    let (lam, v) = linalg::support(rho);
    let rk = lam.len();
    let d = da * db;
    let mut p = SdpProblem::new();
    let sigma = p.herm_var(db);
    let w = p.mat_var(rk, d);
    let lam_m = CMat::from_diagonal(&nalgebra::DVector::from_iterator(rk, lam.iter().map(|&x| r(x))));
    let blk = MExpr::block2(&MExpr::constant(&lam_m), &w.expr(), &sigma.expr().kron_left_eye(da))?;
    p.psd("fidelity", blk)?;
    p.constrain("Tr σ", sigma.expr().trace(), Cmp::Eq, 1.0);
    p.maximize(w.expr().re_inner(&v.adjoint()));
    let (f, raw) = finish("max-entropy", &p)?;
    if f <= 0.0 {
        return Err(Error::SdpFailure { what: "max-entropy", status: Status::Optimal, gap: raw.gap });
    }
    Ok(SdpEntropy { value: 2.0 * f.log2(), gap: raw.gap, iterations: raw.iterations })
}

/// Optional symmetry-adapted variable bases for the smoothing SDP.
#[derive(Debug, Clone, Default)]
pub struct SmoothBases {
    pub rho: Option<Vec<SpMat>>,
    pub sigma: Option<Vec<SpMat>>,
    pub w: Option<Vec<SpMat>>,
}

/// H^ε_min(A|B): max over subnormalized ρ' with P(ρ', ρ) ≤ ε of H_min(A|B)_ρ'.
pub fn hmin_smooth_raw(rho: &CMat, da: usize, db: usize, eps: f64) -> Result<SdpEntropy> {
    guard(rho, da, db)?;
    if eps == 0.0 {
        return hmin_raw(rho, da, db);
    }
    let (lam, v) = linalg::support(rho);
    smooth_core(&v, &lam, linalg::trace(rho).re, da, db, eps, &SmoothBases::default())
}

pub fn hmax_smooth_raw(rho: &CMat, da: usize, db: usize, eps: f64) -> Result<SdpEntropy> {
    guard(rho, da, db)?;
    let (rac, rc) = complement_marginal(rho, da, db);
    let h = hmin_smooth_raw(&rac, da, rc, eps)?;
    Ok(SdpEntropy { value: -h.value, ..h })
}

/// The smoothing SDP for ρ = V Λ V†.
///
/// Variables ρ' on A⊗B, σ on B and W (d×r). The fidelity ‖√ρ'√ρ‖₁ ≥ Re Tr V†W whenever
/// [[ρ', W], [W†, Λ]] ⪰ 0, with equality at the optimum over W. For subnormalized ρ the
/// extra term √((1−Tr ρ')(1−Tr ρ)) is carried by a 2×2 block.
pub(crate) fn smooth_core(v: &CMat, lam: &[f64], tr_rho: f64, da: usize, db: usize, eps: f64, bases: &SmoothBases) -> Result<SdpEntropy> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("smoothing must lie in [0,1), got {eps}")));
    }
    let d = da * db;
    let rk = lam.len();
    let mut p = SdpProblem::new();
    let rp = match &bases.rho {
        Some(b) => p.herm_var_with_basis(d, b.clone()),
        None => p.herm_var(d),
    };
    let sigma = match &bases.sigma {
        Some(b) => p.herm_var_with_basis(db, b.clone()),
        None => p.herm_var(db),
    };
    let w = match &bases.w {
        Some(b) => p.mat_var_with_basis(d, rk, b.clone()),
        None => p.mat_var(d, rk),
    };
    let lam_m = CMat::from_diagonal(&nalgebra::DVector::from_iterator(rk, lam.iter().map(|&x| r(x))));
    p.psd("fidelity", MExpr::block2(&rp.expr(), &w.expr(), &MExpr::constant(&lam_m))?)?;
    p.psd("1⊗σ−ρ'", sigma.expr().kron_left_eye(da).sub(&rp.expr())?)?;
    let mut fid = w.expr().re_inner(v);
    let slack = 1.0 - tr_rho;
    let one_minus = LExpr::constant(1.0) - rp.expr().trace();
    if slack > 1e-12 {
        let t = p.scalar_var();
        let top = MExpr::from_lexpr(&one_minus);
        let off = MExpr::from_lexpr(&t.expr());
        p.psd("subnormal", MExpr::block2(&top, &off, &MExpr::constant(&CMat::from_element(1, 1, r(slack))))?)?;
        fid = fid + t.expr();
    } else {
        p.constrain("Tr ρ' ≤ 1", one_minus, Cmp::Geq, 0.0);
    }
    p.constrain("fidelity ≥ √(1−ε²)", fid, Cmp::Geq, (1.0 - eps * eps).sqrt());
    p.minimize(sigma.expr().trace());
    let (val, raw) = finish("smooth min-entropy", &p)?;
    neg_log("smooth min-entropy", val, raw)
}
