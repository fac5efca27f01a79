use psc_matqi::linalg::{self, r, CMat, C64};

use crate::{Error, Result, RANK_CUTOFF};

/// J = Σ_ij |i⟩⟨j| ⊗ N(|i⟩⟨j|) on in ⊗ out.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub matrix: CMat,
    pub din: usize,
    pub dout: usize,
}

impl ChoiMatrix {
    /// Validates positivity and Tr_out J = 1_in.
    pub fn new(matrix: CMat, din: usize, dout: usize) -> Result<Self> {
        if matrix.nrows() != din * dout || matrix.ncols() != din * dout {
            return Err(psc_matqi::Error::DimensionMismatch(format!("Choi {}x{} vs {din}·{dout}", matrix.nrows(), matrix.ncols())).into());
        }
        linalg::check_psd(&matrix)?;
        let t = linalg::ptrace(&matrix, &[din, dout], &[0]);
        let dev = linalg::max_abs(&(t - linalg::eye(din)));
        if dev > 1e-9 {
            return Err(Error::ChoiTrace(dev));
        }
        Ok(Self { matrix: linalg::hermitize(&matrix), din, dout })
    }

    pub fn rank(&self) -> usize {
        let vals = linalg::eigvalsh(&self.matrix);
        let top = vals.last().copied().unwrap_or(0.0).max(1.0);
        vals.iter().filter(|&&v| v > RANK_CUTOFF * top).count()
    }

    pub fn spectrum(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }
}

pub fn choi_of_kraus(kraus: &[CMat], din: usize, dout: usize) -> CMat {
    let mut j = linalg::zeros(din * dout, din * dout);
    for k in kraus {
        // |v⟩ = Σ_i |i⟩ ⊗ K|i⟩
        let v = psc_matqi::CVec::from_fn(din * dout, |idx, _| k[(idx % dout, idx / dout)]);
        j += &v * v.adjoint();
    }
    j
}

pub fn choi(ch: &crate::Channel) -> ChoiMatrix {
    ch.choi().clone()
}

/// Minimal Kraus set from the eigendecomposition of J.
pub fn kraus_operators_from_choi(j: &CMat, din: usize, dout: usize) -> Vec<CMat> {
    let (vals, vecs) = linalg::eigh(j);
    let top = vals.last().copied().unwrap_or(0.0).max(1.0);
    let mut out = vec![];
    for k in (0..vals.len()).rev() {
        if vals[k] > RANK_CUTOFF * top {
            let s = vals[k].sqrt();
            out.push(CMat::from_fn(dout, din, |o, i| vecs[(i * dout + o, k)] * r(s)));
        }
    }
    if out.is_empty() {
        out.push(linalg::zeros(dout, din));
    }
    out
}

pub fn kraus_from_choi(j: &ChoiMatrix) -> Result<crate::Channel> {
    crate::Channel::new(kraus_operators_from_choi(&j.matrix, j.din, j.dout))
}

/// D(X) = Σ_ij X_ij · J[(i,·),(j,·)] for the map with Choi matrix J on in ⊗ out.
pub fn choi_apply(j: &CMat, din: usize, dout: usize, x: &CMat) -> CMat {
    let mut out = linalg::zeros(dout, dout);
    for i in 0..din {
        for jj in 0..din {
            let xv = x[(i, jj)];
            if xv == C64::new(0.0, 0.0) {
                continue;
            }
            for a in 0..dout {
                for b in 0..dout {
                    out[(a, b)] += xv * j[(i * dout + a, jj * dout + b)];
                }
            }
        }
    }
    out
}

/// (id_A ⊗ D)(X) for X on A ⊗ in.
pub fn choi_apply_on_second(j: &CMat, din: usize, dout: usize, x: &CMat, da: usize) -> CMat {
    let mut out = linalg::zeros(da * dout, da * dout);
    for a in 0..da {
        for a2 in 0..da {
            for i in 0..din {
                for i2 in 0..din {
                    let xv = x[(a * din + i, a2 * din + i2)];
                    if xv == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for o in 0..dout {
                        for o2 in 0..dout {
                            out[(a * dout + o, a2 * dout + o2)] += xv * j[(i * dout + o, i2 * dout + o2)];
                        }
                    }
                }
            }
        }
    }
    out
}
