use nalgebra::{DMatrix, DVector};
use psc_channels::{choi_apply_on_second, complementary, Channel};
use psc_matqi::linalg::{self, c, r, CMat};
use psc_sdp::{solve, Cmp, MExpr, SdpOptions, SdpProblem, SpMat, Status};
use serde::Serialize;

use crate::{Error, Result};

/// Slack at or below which a degrading map is taken to exist.
pub const YES_SLACK: f64 = 1e-6;
/// Slack above which the map is certified not to exist.
pub const NO_SLACK: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Degradable,
    AntiDegradable,
    Symmetric,
    Neither,
    Inconclusive,
}

/// Result of one slack program: the best map found and how far it is from exact.
#[derive(Debug, Clone)]
pub struct SlackFit {
    /// min t with −t·1 ⪯ J(M∘src) − J(target) ⪯ t·1.
    pub slack: f64,
    /// Choi matrix of M on src-output ⊗ target-output, cleaned to an exact channel.
    pub choi: CMat,
    /// ‖J(M∘src) − J(target)‖ for the cleaned map.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct DegradabilityCertificate {
    pub verdict: Verdict,
    /// N^c ≈ M∘N, M: B → E.
    pub degrading: SlackFit,
    /// N ≈ M'∘N^c, M': E → B.
    pub anti_degrading: SlackFit,
    pub dim_in: usize,
    pub dim_out: usize,
    pub dim_env: usize,
}

impl DegradabilityCertificate {
    pub fn is_degradable(&self) -> bool {
        matches!(self.verdict, Verdict::Degradable | Verdict::Symmetric)
    }

    pub fn is_anti_degradable(&self) -> bool {
        matches!(self.verdict, Verdict::AntiDegradable | Verdict::Symmetric)
    }

    /// Degrading Choi matrix when the channel was certified degradable.
    pub fn degrading_choi(&self) -> Option<&CMat> {
        self.is_degradable().then_some(&self.degrading.choi)
    }

    pub fn anti_degrading_choi(&self) -> Option<&CMat> {
        self.is_anti_degradable().then_some(&self.anti_degrading.choi)
    }
}

pub fn certify_degradability(channel: &Channel) -> Result<DegradabilityCertificate> {
    let comp = complementary(channel);
    let degrading = fit_post_processing(channel, &comp, "degrading")?;
    let anti_degrading = fit_post_processing(&comp, channel, "anti-degrading")?;
    let (d, a) = (degrading.slack.min(degrading.residual), anti_degrading.slack.min(anti_degrading.residual));
    let verdict = match (d <= YES_SLACK, a <= YES_SLACK) {
        (true, true) => Verdict::Symmetric,
        (true, false) if a > NO_SLACK => Verdict::Degradable,
        (false, true) if d > NO_SLACK => Verdict::AntiDegradable,
        (false, false) if d > NO_SLACK && a > NO_SLACK => Verdict::Neither,
        _ => Verdict::Inconclusive,
    };
    Ok(DegradabilityCertificate {
        verdict,
        degrading,
        anti_degrading,
        dim_in: channel.din(),
        dim_out: channel.dout(),
        dim_env: comp.dout(),
    })
}

/// J(M∘N) = (id ⊗ M)(J_N) for M given by its Choi matrix.
pub fn compose_choi(jm: &CMat, inner: &Channel, dout: usize) -> CMat {
    choi_apply_on_second(jm, inner.dout(), dout, &inner.choi().matrix, inner.din())
}

/// Finds M minimizing the spectral-norm distance between the Choi matrices of M∘src and target.
pub fn fit_post_processing(src: &Channel, target: &Channel, what: &'static str) -> Result<SlackFit> {
    if src.din() != target.din() {
        return Err(psc_matqi::Error::DimensionMismatch("channels with different inputs".into()).into());
    }
    let (din, dmid, dout) = (src.din(), src.dout(), target.dout());
    let js = &src.choi().matrix;
    let jt = &target.choi().matrix;

    let mut p = SdpProblem::new();
    let jm = p.herm_var(dmid * dout);
    let t = p.scalar_var();
    p.psd("J_M", jm.expr())?;
    let tr = jm.expr().ptrace(&[dmid, dout], &[0])?;
    for i in 0..dmid {
        for j in i..dmid {
            p.constrain("TP re", tr.re_entry(i, j), Cmp::Eq, if i == j { 1.0 } else { 0.0 });
            if i < j {
                let mut k = linalg::zeros(dmid, dmid);
                k[(i, j)] = c(0.0, 1.0);
                p.constrain("TP im", tr.re_inner(&k), Cmp::Eq, 0.0);
            }
        }
    }
    let n = din * dout;
    let diff = MExpr {
        rows: n,
        cols: n,
        constant: SpMat::from_dense(&(-jt.clone())),
        terms: jm
            .basis
            .iter()
            .enumerate()
            .map(|(k, b)| (jm.offset + k, SpMat::from_dense(&choi_apply_on_second(&b.to_dense(), dmid, dout, js, din))))
            .collect(),
    };
    let tt = MExpr::from_lexpr(&t.expr()).kron_left_eye(n);
    p.psd("t−D", tt.sub(&diff)?)?;
    p.psd("t+D", tt.add(&diff)?)?;
    p.minimize(t.expr());
    let s = solve(&p, &SdpOptions::default())?;
    if s.status != Status::Optimal {
        return Err(Error::SdpFailure { what, status: s.status, gap: s.gap });
    }
    let slack = t.value(&s.y).max(0.0);
    let mut choi = clean_choi(&jm.value(&s.y), dmid, dout);
    let mut residual = linalg::norm_herm(&(compose_choi(&choi, src, dout) - jt));
    if residual <= 10.0 * YES_SLACK {
        if let Some((j2, r2)) = polish(&choi, src, target) {
            if r2 < residual {
                choi = j2;
                residual = r2;
            }
        }
    }
    Ok(SlackFit { slack, choi, residual })
}

/// Nearest exact channel: clip negative eigenvalues and renormalize the input marginal.
fn clean_choi(j: &CMat, din: usize, dout: usize) -> CMat {
    let j = linalg::funm(j, |x| x.max(0.0));
    let t = linalg::ptrace(&j, &[din, dout], &[0]);
    let k = linalg::kron(&linalg::pinv_sqrt_psd(&t), &linalg::eye(dout));
    linalg::hermitize(&(&k * j * &k))
}

fn kraus_choi(ks: &[CMat], din: usize, dout: usize) -> CMat {
    let mut j = linalg::zeros(din * dout, din * dout);
    for k in ks {
        let v = psc_matqi::CVec::from_fn(din * dout, |idx, _| k[(idx % dout, idx / dout)]);
        j += &v * v.adjoint();
    }
    j
}

/// Gauss–Newton refinement of the Kraus operators of M towards an exact solution of
/// M∘src = target with Σ K†K = 1. Returns None when it does not improve.
fn polish(j: &CMat, src: &Channel, target: &Channel) -> Option<(CMat, f64)> {
    let (din, dmid, dout) = (src.din(), src.dout(), target.dout());
    let (vals, vecs) = linalg::eigh(j);
    let top = vals.last().copied().unwrap_or(0.0);
    let mut ks: Vec<CMat> = (0..vals.len())
        .rev()
        .filter(|&k| vals[k] > 1e-7 * top)
        .map(|k| CMat::from_fn(dout, dmid, |o, i| vecs[(i * dout + o, k)] * r(vals[k].sqrt())))
        .collect();
    let js = &src.choi().matrix;
    let jt = &target.choi().matrix;
    let n = din * dout;
    let lift = |k: &CMat| linalg::kron(&linalg::eye(din), k);

    let residual_of = |ks: &[CMat]| -> DVector<f64> {
        let mut d = -jt.clone();
        let mut tp = -linalg::eye(dmid);
        for k in ks {
            let l = lift(k);
            d += &l * js * l.adjoint();
            tp += k.adjoint() * k;
        }
        let mut out = Vec::with_capacity(2 * (n * n + dmid * dmid));
        for m in [&d, &tp] {
            for x in m.iter() {
                out.push(x.re);
                out.push(x.im);
            }
        }
        DVector::from_vec(out)
    };
    let start = residual_of(&ks).amax();
    let mut best = start;
    let mut best_ks = ks.clone();
    for _ in 0..20 {
        let res = residual_of(&ks);
        let nunk = 2 * ks.len() * dout * dmid;
        let mut jac = DMatrix::<f64>::zeros(res.len(), nunk);
        let mut col = 0;
        for f in 0..ks.len() {
            let lf = lift(&ks[f]);
            let left = js * lf.adjoint();
            for a in 0..dout {
                for b in 0..dmid {
                    for unit in [c(1.0, 0.0), c(0.0, 1.0)] {
                        let mut dk = linalg::zeros(dout, dmid);
                        dk[(a, b)] = unit;
                        let dl = lift(&dk);
                        let x = &dl * &left;
                        let dd = &x + x.adjoint();
                        let y = dk.adjoint() * &ks[f];
                        let dtp = &y + y.adjoint();
                        let mut row = 0;
                        for m in [&dd, &dtp] {
                            for v in m.iter() {
                                jac[(row, col)] = v.re;
                                jac[(row + 1, col)] = v.im;
                                row += 2;
                            }
                        }
                        col += 1;
                    }
                }
            }
        }
        let svd = jac.svd(true, true);
        let step = svd.solve(&(-&res), 1e-10).ok()?;
        let mut col = 0;
        for k in ks.iter_mut() {
            for a in 0..dout {
                for b in 0..dmid {
                    k[(a, b)] += c(step[col], step[col + 1]);
                    col += 2;
                }
            }
        }
        let now = residual_of(&ks).amax();
        if !now.is_finite() {
            return None;
        }
        let improved = now < best * 0.5;
        if now < best {
            best = now;
            best_ks = ks.clone();
        }
        if !improved || best < 1e-14 {
            break;
        }
    }
    if best >= start {
        return None;
    }
    let j2 = kraus_choi(&best_ks, dmid, dout);
    let r2 = linalg::norm_herm(&(compose_choi(&j2, src, dout) - jt));
    Some((j2, r2))
}
