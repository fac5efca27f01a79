use nalgebra::DVector;
use psc_entropies::minmax::{hmin_raw, hmin_smooth_raw};
use psc_matqi::linalg::{self, r, CMat, CVec};
use psc_matqi::{haar_projector, rng_from_seed};
use psc_sdp::{solve, Cmp, MExpr, SdpOptions, SdpProblem, Status};
use serde::Serialize;

use crate::{Error, Result};

/// Samples with t_Q below this are redrawn.
pub const T_Q_FLOOR: f64 = 1e-12;
const MAX_DRAWS: usize = 16;

#[derive(Debug, Clone, Serialize)]
pub struct DecouplingTrialResult {
    pub seed: u64,
    pub d: usize,
    pub t_q: f64,
    /// Number of projectors drawn (more than one after a degenerate sample).
    pub draws: usize,
    /// min over φ of P(ψ̃_Q^{AE}, τ_Q ⊗ φ^E)
    pub distance: f64,
    pub fidelity: f64,
    pub hmin_eta: f64,
    pub eta: f64,
    pub eps: f64,
    /// η + 2^{−¼(H^η_min(A|E) − log d)}
    pub bound: f64,
    /// max(1, ⌊2^{H^η_min(A|E) − 4 log(1/ε)}⌋)
    pub prop4_rank: usize,
    pub gap: f64,
}

pub fn prop4_rank(hmin_eta: f64, eps: f64) -> usize {
    let x = (hmin_eta - 4.0 * (1.0 / eps).log2()).exp2().floor();
    if x.is_finite() && x >= 1.0 {
        x as usize
    } else {
        1
    }
}

/// ψ on A⊗B⊗E together with H^η_min(A|E)_ψ, shared by repeated trials.
#[derive(Debug, Clone)]
pub struct DecouplingSetup {
    psi: CVec,
    dims: [usize; 3],
    pub eta: f64,
    pub eps: f64,
    pub hmin_eta: f64,
}

fn check_state(psi: &CVec, dims: [usize; 3]) -> Result<()> {
    let total = dims.iter().product::<usize>();
    if psi.len() != total {
        return Err(psc_matqi::Error::DimensionMismatch(format!("state of length {} on {dims:?}", psi.len())).into());
    }
    if (psi.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition("state vector must be normalized".into()));
    }
    Ok(())
}

impl DecouplingSetup {
    pub fn new(psi: &CVec, dims: [usize; 3], eta: f64, eps: f64) -> Result<Self> {
        check_state(psi, dims)?;
        if !(0.0..1.0).contains(&eta) || !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::Precondition(format!("need 0 ≤ η < 1 and 0 < ε ≤ 1, got η = {eta}, ε = {eps}")));
        }
        let [da, _, de] = dims;
        let ae = linalg::ptrace_pure(psi, &dims, &[0, 2]);
        let hmin_eta = hmin_smooth_raw(&ae, da, de, eta)?.value;
        Ok(Self { psi: psi.clone(), dims, eta, eps, hmin_eta })
    }

    pub fn bound(&self, d: usize) -> f64 {
        self.eta + (-0.25 * (self.hmin_eta - (d as f64).log2())).exp2()
    }

    pub fn trial(&self, d: usize, seed: u64) -> Result<DecouplingTrialResult> {
        let [da, db, de] = self.dims;
        if d == 0 || d > da {
            return Err(Error::Precondition(format!("need 1 ≤ d ≤ |A| = {da}, got {d}")));
        }
        let mut rng = rng_from_seed(seed);
        let mut draws = 0;
        let (q, v, t_q) = loop {
            draws += 1;
            let q = haar_projector(da, d, &mut rng)?;
            let v = linalg::kron(&q, &linalg::eye(db * de)) * &self.psi;
            let t = da as f64 / d as f64 * v.norm_squared();
            if t >= T_Q_FLOOR {
                break (q, v, t);
            }
            if draws == MAX_DRAWS {
                return Err(Error::DegenerateSample(t, draws));
            }
        };
        let tilde = &v / r(v.norm());
        let ae = linalg::ptrace_pure(&tilde, &self.dims, &[0, 2]);
        // both sides live on range(Q) ⊗ E; compressing keeps the fidelity block strictly feasible
        let (_, vq) = linalg::support(&q);
        let vqe = linalg::kron(&vq.columns(0, d).into_owned(), &linalg::eye(de));
        let ae = vqe.adjoint() * ae * &vqe;
        let (fidelity, gap) = best_product_fidelity(&ae, &(linalg::eye(d) * r(1.0 / d as f64)), de)?;
        Ok(DecouplingTrialResult {
            seed,
            d,
            t_q,
            draws,
            distance: (1.0 - fidelity * fidelity).max(0.0).sqrt(),
            fidelity,
            hmin_eta: self.hmin_eta,
            eta: self.eta,
            eps: self.eps,
            bound: self.bound(d),
            prop4_rank: prop4_rank(self.hmin_eta, self.eps),
            gap,
        })
    }
}

pub fn decoupling_trial(psi: &CVec, dims: [usize; 3], d: usize, eta: f64, eps: f64, seed: u64) -> Result<DecouplingTrialResult> {
    DecouplingSetup::new(psi, dims, eta, eps)?.trial(d, seed)
}

/// max over subnormalized φ of F(ρ^{AE}, τ ⊗ φ), through the support of ρ.
fn best_product_fidelity(rho: &CMat, tau: &CMat, de: usize) -> Result<(f64, f64)> {
    let (lam, v) = linalg::support(rho);
    let rk = lam.len();
    let n = rho.nrows();
    let mut p = SdpProblem::new();
    let phi = p.herm_var(de);
    let w = p.mat_var(rk, n);
    let lam_m = CMat::from_diagonal(&DVector::from_iterator(rk, lam.iter().map(|&x| r(x))));
    p.psd("fidelity", MExpr::block2(&MExpr::constant(&lam_m), &w.expr(), &phi.expr().kron_left(tau))?)?;
    p.constrain("Tr φ", phi.expr().trace(), Cmp::Leq, 1.0);
    p.maximize(w.expr().re_inner(&v.adjoint()));
    let s = solve(&p, &SdpOptions::default())?;
    if s.status != Status::Optimal {
        return Err(Error::SdpFailure { what: "product-state fidelity", status: s.status, gap: s.gap });
    }
    Ok((s.primal_value.clamp(0.0, 1.0), s.gap))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BertaEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub bound: f64,
    pub hmin: f64,
    pub trials: usize,
}

impl BertaEstimate {
    pub fn holds(&self) -> bool {
        self.mean <= self.bound + 3.0 * self.stderr
    }
}

/// Monte-Carlo estimate of ∫dQ ‖(|A|/d)(Q⊗1)ψ^{AE}(Q⊗1) − τ_Q ⊗ ψ^E‖₁ against 2^{−½(H_min(A|E) − log d)}.
pub fn berta_average(psi: &CVec, dims: [usize; 3], d: usize, trials: usize, seed: u64) -> Result<BertaEstimate> {
    check_state(psi, dims)?;
    let [da, _, de] = dims;
    if trials < 10 {
        return Err(Error::Precondition(format!("need at least 10 trials, got {trials}")));
    }
    if d == 0 || d > da {
        return Err(Error::Precondition(format!("need 1 ≤ d ≤ |A| = {da}, got {d}")));
    }
    let ae = linalg::ptrace_pure(psi, &dims, &[0, 2]);
    let e = linalg::ptrace(&ae, &[da, de], &[1]);
    let hmin = hmin_raw(&ae, da, de)?.value;
    let mut rng = rng_from_seed(seed);
    let scale = r(da as f64 / d as f64);
    let samples = (0..trials)
        .map(|_| {
            let q = haar_projector(da, d, &mut rng)?;
            let qe = linalg::kron(&q, &linalg::eye(de));
            let lhs = &qe * &ae * &qe * scale - linalg::kron(&(&q * r(1.0 / d as f64)), &e);
            Ok(linalg::trace_norm_herm(&lhs))
        })
        .collect::<Result<Vec<f64>>>()?;
    let k = trials as f64;
    let mean = samples.iter().sum::<f64>() / k;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    Ok(BertaEstimate { mean, stderr: (var / k).sqrt(), bound: (-0.5 * (hmin - (d as f64).log2())).exp2(), hmin, trials })
}
