//! Numerical checks of the min/max-entropy inequalities. Each check evaluates both sides
//! of one inequality lhs ≤ rhs; states are raw operators on A⊗B(⊗C) with A first.

use psc_channels::Channel;
use psc_matqi::linalg::{self, CMat};

use crate::minmax::{hmax_smooth_raw, hmin_smooth_raw};
use crate::{Error, Result};

#[derive(Debug, Clone, serde::Serialize)]
pub struct LemmaCheck {
    pub lemma: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

impl LemmaCheck {
    /// rhs − lhs; negative means violated.
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn holds(&self, slack: f64) -> bool {
        self.margin() >= -slack
    }
}

fn smoothing(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("smoothing parameter {x} outside [0,1)")));
    }
    Ok(x)
}

fn hmin(rho: &CMat, da: usize, db: usize, eps: f64) -> Result<f64> {
    Ok(hmin_smooth_raw(rho, da, db, smoothing(eps)?)?.value)
}

fn hmax(rho: &CMat, da: usize, db: usize, eps: f64) -> Result<f64> {
    Ok(hmax_smooth_raw(rho, da, db, smoothing(eps)?)?.value)
}

/// H^ε(A|BC) ≤ H^ε(A|B) for both min and max.
pub fn monotonicity_partial_trace(rho: &CMat, dims: [usize; 3], eps: f64) -> Result<Vec<LemmaCheck>> {
    let [da, db, dc] = dims;
    let rab = linalg::ptrace(rho, &dims, &[0, 1]);
    Ok(vec![
        LemmaCheck { lemma: "monotonicity (min, partial trace)", lhs: hmin(rho, da, db * dc, eps)?, rhs: hmin(&rab, da, db, eps)? },
        LemmaCheck { lemma: "monotonicity (max, partial trace)", lhs: hmax(rho, da, db * dc, eps)?, rhs: hmax(&rab, da, db, eps)? },
    ])
}

/// H^ε(A|B)_ρ ≤ H^ε(A|C)_{(id⊗T)ρ} for a channel T on the conditioning system.
pub fn monotonicity_channel(rho: &CMat, da: usize, db: usize, t: &Channel, eps: f64) -> Result<Vec<LemmaCheck>> {
    if t.din() != db {
        return Err(psc_matqi::Error::DimensionMismatch(format!("channel input {} vs |B| = {db}", t.din())).into());
    }
    let out = t.apply_on(rho, &[da, db], 1);
    let dc = t.dout();
    Ok(vec![
        LemmaCheck { lemma: "monotonicity (min, channel)", lhs: hmin(rho, da, db, eps)?, rhs: hmin(&out, da, dc, eps)? },
        LemmaCheck { lemma: "monotonicity (max, channel)", lhs: hmax(rho, da, db, eps)?, rhs: hmax(&out, da, dc, eps)? },
    ])
}

fn log_two_over_eta_sq(eta: f64) -> Result<f64> {
    if eta <= 0.0 {
        return Err(Error::InvalidParameter("η must be positive".into()));
    }
    Ok((2.0 / (eta * eta)).log2())
}

/// H^{ε+2δ+η}_max(AB|C) ≤ H^δ_max(B|C) + H^ε_max(A|BC) + log(2/η²).
pub fn chain_max_le_max_max(rho: &CMat, dims: [usize; 3], eps: f64, delta: f64, eta: f64) -> Result<LemmaCheck> {
    let [da, db, dc] = dims;
    let l = log_two_over_eta_sq(eta)?;
    let rbc = linalg::ptrace(rho, &dims, &[1, 2]);
    let lhs = hmax(rho, da * db, dc, eps + 2.0 * delta + eta)?;
    let rhs = hmax(&rbc, db, dc, delta)? + hmax(rho, da, db * dc, eps)? + l;
    Ok(LemmaCheck { lemma: "chain rule max ≤ max + max", lhs, rhs })
}

/// H^δ_min(B|C) + H^{ε+2δ+2η}_max(A|BC) − 3 log(2/η²) ≤ H^ε_max(AB|C).
pub fn chain_max_ge_min_max(rho: &CMat, dims: [usize; 3], eps: f64, delta: f64, eta: f64) -> Result<LemmaCheck> {
    let [da, db, dc] = dims;
    let l = log_two_over_eta_sq(eta)?;
    let rbc = linalg::ptrace(rho, &dims, &[1, 2]);
    let lhs = hmin(&rbc, db, dc, delta)? + hmax(rho, da, db * dc, eps + 2.0 * delta + 2.0 * eta)? - 3.0 * l;
    let rhs = hmax(rho, da * db, dc, eps)?;
    Ok(LemmaCheck { lemma: "chain rule max ≥ min + max", lhs, rhs })
}

/// H^{sin α}_min(A|B) ≤ H^{sin β}_max(A|B) + log(1/cos²(α+β)), for α+β < π/2.
pub fn min_max_inequality(rho: &CMat, da: usize, db: usize, alpha: f64, beta: f64) -> Result<LemmaCheck> {
    if alpha < 0.0 || beta < 0.0 || alpha + beta >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::InvalidParameter(format!("need α, β ≥ 0 and α+β < π/2, got {alpha} + {beta}")));
    }
    let c = (alpha + beta).cos();
    Ok(LemmaCheck {
        lemma: "min ≤ max + log(1/cos²(α+β))",
        lhs: hmin(rho, da, db, alpha.sin())?,
        rhs: hmax(rho, da, db, beta.sin())? + (1.0 / (c * c)).log2(),
    })
}

/// The relaxed form H^ε_min ≤ H^δ_max + log(1/(1−(ε+δ)²)), for ε+δ < 1.
pub fn min_max_inequality_simple(rho: &CMat, da: usize, db: usize, eps: f64, delta: f64) -> Result<LemmaCheck> {
    if eps < 0.0 || delta < 0.0 || eps + delta >= 1.0 {
        return Err(Error::InvalidParameter(format!("need ε, δ ≥ 0 and ε+δ < 1, got {eps} + {delta}")));
    }
    let s = eps + delta;
    Ok(LemmaCheck {
        lemma: "min ≤ max + log(1/(1−(ε+δ)²))",
        lhs: hmin(rho, da, db, eps)?,
        rhs: hmax(rho, da, db, delta)? + (1.0 / (1.0 - s * s)).log2(),
    })
}

/// H^{√(1−ε⁴)}_max(A|B) ≤ H^ε_min(A|B), for 0 < ε < 1.
pub fn max_min_inequality(rho: &CMat, da: usize, db: usize, eps: f64) -> Result<LemmaCheck> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < ε < 1, got {eps}")));
    }
    let big = (1.0 - eps.powi(4)).sqrt();
    Ok(LemmaCheck { lemma: "max^{√(1−ε⁴)} ≤ min^ε", lhs: hmax(rho, da, db, big)?, rhs: hmin(rho, da, db, eps)? })
}

/// H^ε_max(A|B)_ρ versus −H^ε_min(A|C) on the purification (id⊗id⊗W)|ψ⟩ for an isometry W
/// on the purifying system; the two numbers should coincide.
pub fn duality(rho: &CMat, da: usize, db: usize, w: &CMat, eps: f64) -> Result<LemmaCheck> {
    let (psi, rk) = linalg::purify(rho);
    if w.ncols() != rk {
        return Err(psc_matqi::Error::DimensionMismatch(format!("isometry on a {rk}-dimensional purifier")).into());
    }
    let big = linalg::kron(&linalg::eye(da * db), w) * psi;
    let dc = w.nrows();
    let rac = linalg::ptrace_pure(&big, &[da, db, dc], &[0, 2]);
    Ok(LemmaCheck { lemma: "duality", lhs: hmax(rho, da, db, eps)?, rhs: -hmin(&rac, da, dc, eps)? })
}

/// H^{ε√2}_max(A|B)_ρ ≤ H^ε_max(A|B)_ρ̄ with ρ̄ = Σ p_i (U_i⊗V_i) ρ (U_i⊗V_i)†.
pub fn concavity(rho: &CMat, da: usize, db: usize, ensemble: &[(f64, CMat, CMat)], eps: f64) -> Result<LemmaCheck> {
    let mut bar = linalg::zeros(da * db, da * db);
    for (p, u, v) in ensemble {
        let k = linalg::kron(u, v);
        bar += &k * rho * k.adjoint() * linalg::r(*p);
    }
    let bar = linalg::hermitize(&bar);
    Ok(LemmaCheck { lemma: "concavity under local unitaries", lhs: hmax(rho, da, db, eps * 2f64.sqrt())?, rhs: hmax(&bar, da, db, eps)? })
}

/// H^ε_max(A|B)_ρ̄ ≤ max_i H^ε_max(A|B)_{ρ_i} + log M.
pub fn max_plus_log(states: &[(f64, CMat)], da: usize, db: usize, eps: f64) -> Result<LemmaCheck> {
    if states.is_empty() {
        return Err(Error::InvalidParameter("empty ensemble".into()));
    }
    let mut bar = linalg::zeros(da * db, da * db);
    let mut worst = f64::NEG_INFINITY;
    for (p, s) in states {
        bar += s * linalg::r(*p);
        worst = worst.max(hmax(s, da, db, eps)?);
    }
    let bar = linalg::hermitize(&bar);
    Ok(LemmaCheck { lemma: "max ≤ max_i + log M", lhs: hmax(&bar, da, db, eps)?, rhs: worst + (states.len() as f64).log2() })
}

/// (1/√2)(|Φ_d⟩^{ÃE}|*⟩^{E′} + |Φ_d⟩^{ÃE′}|*⟩^{E}) on Ã⊗E⊗E′ with |E| = |E′| = d+1 and
/// |*⟩ the extra basis vector.
pub fn erasure_extremal_state(d: usize) -> psc_matqi::CVec {
    let e = d + 1;
    let mut v = psc_matqi::CVec::zeros(d * e * e);
    let amp = linalg::r(1.0 / (2.0 * d as f64).sqrt());
    for i in 0..d {
        v[(i * e + i) * e + d] += amp;
        v[(i * e + d) * e + i] += amp;
    }
    v
}
