use psc_matqi::linalg::{self, r, CMat, CVec};

use crate::dilation::TypeIDilation;
use crate::{Error, Result};

/// Schmidt cutoff for the test state.
pub const RANK_CUTOFF: f64 = 1e-8;

/// W: G′ → E⊗E′ with SWAP·W = sign·W, built from the test state ψ₀ = (1⊗VU)|φ₀⟩.
#[derive(Debug, Clone)]
pub struct SymmetricExtraction {
    /// (dE·dE) × dG
    pub w: CMat,
    /// Orthonormal basis of G = supp ψ₀^{AF} inside A⊗F (eigenvectors of ψ₀^{AF}).
    pub g_basis: CMat,
    /// Eigenvalues of ψ₀^{AF} on G; χ = Σ √λ_k |k⟩|k⟩.
    pub chi: Vec<f64>,
    pub sign: f64,
    /// max |SWAP·W − sign·W|.
    pub swap_residual: f64,
    pub dim_a: usize,
    /// Coefficient matrix of φ₀ (dA × dA′).
    phi0: CMat,
}

impl SymmetricExtraction {
    pub fn dim_g(&self) -> usize {
        self.chi.len()
    }

    /// |χ⟩ on G⊗G′.
    pub fn chi_vector(&self) -> CVec {
        let g = self.dim_g();
        let mut v = CVec::zeros(g * g);
        for (k, l) in self.chi.iter().enumerate() {
            v[k * g + k] = r(l.sqrt());
        }
        v
    }

    pub fn isometry_residual(&self) -> f64 {
        psc_matqi::state::isometry_defect(&self.w)
    }
}

fn type_i_phase(dil: &TypeIDilation) -> Result<f64> {
    let df = dil.dim_f;
    let c = dil.x_f[(0, 0)].re.signum();
    let dev = linalg::max_abs(&(&dil.x_f - linalg::eye(df) * r(c)));
    if dev > 1e-8 {
        return Err(Error::NotTypeI(dev));
    }
    Ok(c)
}

pub fn extract_symmetric_channel(dil: &TypeIDilation, phi0: &CVec) -> Result<SymmetricExtraction> {
    type_i_phase(dil)?;
    let (din, de, df) = (dil.dim_in, dil.dim_env, dil.dim_f);
    if phi0.len() % din != 0 {
        return Err(psc_matqi::Error::DimensionMismatch(format!("test state of length {} for |A′| = {din}", phi0.len())).into());
    }
    let da = phi0.len() / din;
    let (s, _, _) = linalg::schmidt(phi0, da, din);
    let top = s.first().copied().unwrap_or(0.0);
    let rank = s.iter().filter(|&&x| x > RANK_CUTOFF * top.max(1e-300)).count();
    if rank < din || da < din {
        return Err(Error::RankDeficient { rank, need: din });
    }
    let psi = linalg::kron(&linalg::eye(da), &dil.vu()) * phi0;
    let (daf, dee) = (da * df, de * de);
    let m = linalg::vec_to_mat(&psi, daf, dee);
    let (vals, g_basis) = linalg::support(&(&m * m.adjoint()));
    let dg = vals.len();
    let mut w = linalg::zeros(dee, dg);
    for k in 0..dg {
        let row = g_basis.column(k).adjoint() * &m;
        for y in 0..dee {
            w[(y, k)] = row[(0, y)] / r(vals[k].sqrt());
        }
    }
    let sw = linalg::swap_operator(de, de) * &w;
    let overlap: f64 = (w.adjoint() * &sw).trace().re / dg as f64;
    let sign = if overlap >= 0.0 { 1.0 } else { -1.0 };
    let swap_residual = linalg::max_abs(&(&sw - &w * r(sign)));
    Ok(SymmetricExtraction {
        w,
        g_basis,
        chi: vals,
        sign,
        swap_residual,
        dim_a: da,
        phi0: linalg::vec_to_mat(phi0, da, din),
    })
}

/// |ψ⟩ = (Ŵ ⊗ W)|ξ⟩ for ψ = (1⊗VU)|φ⟩.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Ŵ: G → A⊗F
    pub w_hat: CMat,
    /// |ξ⟩ on G⊗G′
    pub xi: CVec,
    /// ‖ψ − (Ŵ⊗W)ξ‖
    pub residual: f64,
}

/// Writes φ = (M⊗1)φ₀ with M = mat(φ)·mat(φ₀)⁻¹, then takes the polar decomposition
/// (M⊗1_F)J = Ŵ·P of the map on G and sets ξ = (P⊗1)χ.
pub fn decompose_via_symmetric(ext: &SymmetricExtraction, dil: &TypeIDilation, phi: &CVec) -> Result<Decomposition> {
    let (din, de, df, da) = (dil.dim_in, dil.dim_env, dil.dim_f, ext.dim_a);
    if phi.len() != da * din {
        return Err(psc_matqi::Error::DimensionMismatch(format!("state of length {} on {da}⊗{din}", phi.len())).into());
    }
    let nrm = phi.norm();
    if (nrm - 1.0).abs() > 1e-9 {
        return Err(psc_matqi::Error::NotNormalized(nrm).into());
    }
    let mphi = linalg::vec_to_mat(phi, da, din);
    // mat(φ₀) has full column rank, so its pseudo-inverse is a left inverse
    let pinv = ext.phi0.clone().pseudo_inverse(1e-12).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let m = &mphi * &pinv;
    let t = linalg::kron(&m, &linalg::eye(df)) * &ext.g_basis;
    let svd = t.svd(true, true);
    let (u, vt) = (svd.u.expect("left vectors"), svd.v_t.expect("right vectors"));
    let w_hat = &u * &vt;
    let p = vt.adjoint() * CMat::from_diagonal(&svd.singular_values.map(|s| r(s))) * &vt;
    let dg = ext.dim_g();
    let chi_mat = CMat::from_diagonal(&nalgebra::DVector::from_iterator(dg, ext.chi.iter().map(|l| r(l.sqrt()))));
    let xi_mat = &p * chi_mat;
    let rec = &w_hat * &xi_mat * ext.w.transpose();
    let psi = linalg::kron(&linalg::eye(da), &dil.vu()) * phi;
    let target = linalg::vec_to_mat(&psi, da * df, de * de);
    let residual = (rec - target).norm();
    if residual > 1e-7 {
        return Err(Error::SupportMismatch(residual));
    }
    Ok(Decomposition { w_hat, xi: linalg::mat_to_vec(&xi_mat), residual })
}
