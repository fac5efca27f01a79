use psc_channels::{choi_apply_on_second, Channel};
use psc_matqi::linalg::{self, c, CMat, CVec};
use psc_sdp::{solve, Cmp, MExpr, SdpOptions, SdpProblem, SpMat, Status};
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct DecoderResult {
    /// √⟨Φ_d|(id⊗D∘N)(φ)|Φ_d⟩ at the optimal D.
    pub fidelity: f64,
    /// The entanglement fidelity ⟨Φ_d|·|Φ_d⟩ itself.
    pub overlap: f64,
    pub gap: f64,
    #[serde(skip)]
    pub decoder_choi: CMat,
}

/// |Φ_d⟩ on Ã⊗A′ with the A′ half on the first d basis vectors.
pub fn embedded_max_entangled(d: usize, din: usize) -> Result<CVec> {
    if d == 0 || d > din {
        return Err(Error::Precondition(format!("code dimension {d} for input dimension {din}")));
    }
    let mut v = CVec::zeros(d * din);
    for i in 0..d {
        v[i * din + i] = c(1.0 / (d as f64).sqrt(), 0.0);
    }
    Ok(v)
}

/// Largest entanglement fidelity over decoders D: B → C, |C| = d, for the input φ on Ã⊗A′.
pub fn optimal_decoder_fidelity(channel: &Channel, phi: &CVec, d: usize) -> Result<DecoderResult> {
    let (din, db) = (channel.din(), channel.dout());
    if d == 0 || phi.len() != d * din {
        return Err(Error::Precondition(format!("input of length {} on {d}⊗{din}", phi.len())));
    }
    if db * d > psc_matqi::MAX_DIM {
        return Err(psc_matqi::Error::DimensionGuard(db * d).into());
    }
    let rho = channel.apply_on(&linalg::proj(phi), &[d, din], 1);
    let target = linalg::proj(&linalg::max_entangled(d));

    let mut p = SdpProblem::new();
    let jd = p.herm_var(db * d);
    p.psd("J_D", jd.expr())?;
    let tr = jd.expr().ptrace(&[db, d], &[0])?;
    for i in 0..db {
        for j in i..db {
            p.constrain("TP re", tr.re_entry(i, j), Cmp::Eq, if i == j { 1.0 } else { 0.0 });
            if i < j {
                let mut k = linalg::zeros(db, db);
                k[(i, j)] = c(0.0, 1.0);
                p.constrain("TP im", tr.re_inner(&k), Cmp::Eq, 0.0);
            }
        }
    }
    let out = MExpr {
        rows: d * d,
        cols: d * d,
        constant: SpMat::from_dense(&linalg::zeros(d * d, d * d)),
        terms: jd
            .basis
            .iter()
            .enumerate()
            .map(|(k, b)| (jd.offset + k, SpMat::from_dense(&choi_apply_on_second(&b.to_dense(), db, d, &rho, d))))
            .collect(),
    };
    p.maximize(out.re_inner(&target));
    let s = solve(&p, &SdpOptions::default())?;
    if s.status != Status::Optimal {
        return Err(Error::SdpFailure { what: "decoder", status: s.status, gap: s.gap });
    }
    let overlap = s.primal_value.clamp(0.0, 1.0);
    Ok(DecoderResult { fidelity: overlap.sqrt(), overlap, gap: s.gap, decoder_choi: jd.value(&s.y) })
}
