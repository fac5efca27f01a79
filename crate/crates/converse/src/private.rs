use psc_channels::{complementary, Channel};
use nalgebra::DVector;
use psc_matqi::linalg::{self, r, CMat};
use psc_sdp::{solve, Cmp, LExpr, MExpr, SdpOptions, SdpProblem, Status};
use serde::Serialize;

use crate::{Error, Result};

const CODE_TOL: f64 = 1e-8;

/// Signal states ρ_x on A′ and a decoding POVM {D_x} on B.
#[derive(Debug, Clone)]
pub struct PrivateCode {
    signals: Vec<CMat>,
    povm: Vec<CMat>,
}

impl PrivateCode {
    pub fn new(signals: Vec<CMat>, povm: Vec<CMat>) -> Result<Self> {
        if signals.is_empty() || signals.len() != povm.len() {
            return Err(Error::InvalidCode(format!("{} signals and {} POVM elements", signals.len(), povm.len())));
        }
        let din = signals[0].nrows();
        let dout = povm[0].nrows();
        let mut sum = linalg::zeros(dout, dout);
        for (x, (s, d)) in signals.iter().zip(&povm).enumerate() {
            if s.shape() != (din, din) || d.shape() != (dout, dout) {
                return Err(Error::InvalidCode(format!("element {x} has the wrong shape")));
            }
            linalg::check_psd(s)?;
            linalg::check_psd(d)?;
            if (linalg::trace(s).re - 1.0).abs() > CODE_TOL {
                return Err(Error::InvalidCode(format!("signal {x} is not normalized")));
            }
            sum += d;
        }
        let dev = linalg::max_abs(&(sum - linalg::eye(dout)));
        if dev > CODE_TOL {
            return Err(Error::InvalidCode(format!("POVM sums to identity only up to {dev:.2e}")));
        }
        Ok(Self { signals, povm })
    }

    pub fn signals(&self) -> &[CMat] {
        &self.signals
    }

    pub fn povm(&self) -> &[CMat] {
        &self.povm
    }

    pub fn size(&self) -> usize {
        self.signals.len()
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PrivateMetrics {
    pub error: f64,
    pub privacy: f64,
    /// max_σ (1/M) Σ F(N^c(ρ_x), σ)
    pub mean_fidelity: f64,
    pub gap: f64,
}

pub fn private_code_metrics(channel: &Channel, code: &PrivateCode) -> Result<PrivateMetrics> {
    if code.signals[0].nrows() != channel.din() || code.povm[0].nrows() != channel.dout() {
        return Err(Error::InvalidCode("code dimensions do not match the channel".into()));
    }
    let m = code.size() as f64;
    let success: f64 = code
        .signals
        .iter()
        .zip(&code.povm)
        .map(|(s, d)| linalg::hs_re(&channel.apply_raw(s), d).max(0.0).sqrt())
        .sum::<f64>()
        / m;
    let error = (1.0 - success * success).max(0.0).sqrt();

    let comp = complementary(channel);
    let env: Vec<CMat> = code.signals.iter().map(|s| comp.apply_raw(s)).collect();
    if env.iter().all(|w| linalg::max_abs(&(w - &env[0])) <= 1e-12) {
        return Ok(PrivateMetrics { error, privacy: 0.0, mean_fidelity: 1.0, gap: 0.0 });
    }
    let de = comp.dout();
    let mut p = SdpProblem::new();
    let sigma = p.herm_var(de);
    let mut objective = LExpr::constant(0.0);
    for (x, w) in env.iter().enumerate() {
        // F(ω, σ) = max Re Tr VW over [[Λ, W], [W†, σ]] ⪰ 0 with ω = VΛV†
        let (lam, v) = linalg::support(w);
        let rk = lam.len();
        let wv = p.mat_var(rk, de);
        let lam_m = CMat::from_diagonal(&DVector::from_iterator(rk, lam.iter().map(|&l| r(l))));
        p.psd(&format!("F{x}"), MExpr::block2(&MExpr::constant(&lam_m), &wv.expr(), &sigma.expr())?)?;
        objective = objective + wv.expr().re_inner(&v.adjoint()).scale(1.0 / m);
    }
    p.constrain("Tr σ", sigma.expr().trace(), Cmp::Eq, 1.0);
    p.maximize(objective);
    let s = solve(&p, &SdpOptions::default())?;
    if s.status != Status::Optimal {
        return Err(Error::SdpFailure { what: "privacy", status: s.status, gap: s.gap });
    }
    let f = s.primal_value.clamp(0.0, 1.0);
    Ok(PrivateMetrics { error, privacy: (1.0 - f * f).max(0.0).sqrt(), mean_fidelity: f, gap: s.gap })
}
