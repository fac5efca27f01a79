use psc_degradable::SymmetricExtraction;
use psc_entropies::aep::site_permutation_maps;
use psc_matqi::linalg::{self, c, CMat, CVec};
use serde::Serialize;

use crate::{Error, Result};

/// Largest SWAP·W − sign·W accepted.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// |ψ⟩ = (1⊗W)^{⊗n}|ξ⟩ on G^n ⊗ E^n ⊗ E′^n.
#[derive(Debug, Clone, Serialize)]
pub struct MultiSymmetricState {
    #[serde(skip)]
    pub psi: CVec,
    pub n: usize,
    pub dim_g: usize,
    pub dim_e: usize,
    /// SWAP·W = sign·W.
    pub sign: f64,
    /// min over phases of ‖S_iψ − e^{iθ}ψ‖_max for the single-site swaps S_i.
    pub generator_residuals: Vec<f64>,
}

impl MultiSymmetricState {
    /// [|G|^n, |E|^n, |E′|^n]
    pub fn dims(&self) -> [usize; 3] {
        [self.dim_g.pow(self.n as u32), self.dim_e.pow(self.n as u32), self.dim_e.pow(self.n as u32)]
    }

    fn factor_dims(&self) -> Vec<usize> {
        let mut d = vec![self.dim_g; self.n];
        d.extend(std::iter::repeat_n(self.dim_e, 2 * self.n));
        d
    }

    pub fn symmetry_residual(&self) -> f64 {
        self.generator_residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Swaps E_I ↔ E′_I for the sites in `subset` and returns min over phases of the deviation.
    pub fn subset_residual(&self, subset: &[usize]) -> f64 {
        let n = self.n;
        let mut perm: Vec<usize> = (0..3 * n).collect();
        for &i in subset {
            perm.swap(n + i, 2 * n + i);
        }
        phase_residual(&self.psi, &linalg::permute_vec(&self.psi, &self.factor_dims(), &perm))
    }

    /// ψ^{G^n E^n}
    pub fn marginal_ge(&self) -> CMat {
        let [g, e, e2] = self.dims();
        linalg::ptrace_pure(&self.psi, &[g, e, e2], &[0, 1])
    }

    /// Site permutations π ∈ S_n (as index maps on G^n E^n) leaving ψψ† invariant.
    pub fn permutation_stabilizer(&self) -> Vec<Vec<usize>> {
        let full = site_permutation_maps(&[self.dim_g, self.dim_e, self.dim_e], self.n);
        let small = site_permutation_maps(&[self.dim_g, self.dim_e], self.n);
        full.iter()
            .zip(small)
            .filter(|(f, _)| {
                let moved = CVec::from_fn(self.psi.len(), |i, _| self.psi[f[i]]);
                phase_residual(&self.psi, &moved) <= SYMMETRY_TOL
            })
            .map(|(_, s)| s)
            .collect()
    }
}

fn phase_residual(psi: &CVec, other: &CVec) -> f64 {
    let ov = psi.dotc(other);
    let ph = if ov.norm() > 0.0 { ov / ov.norm() } else { c(1.0, 0.0) };
    (other - psi * ph).camax()
}

/// Measures SWAP·W = ±W for W: G′ → E⊗E′.
pub fn swap_sign(w: &CMat, de: usize) -> Result<(f64, f64)> {
    if w.nrows() != de * de {
        return Err(Error::Shape(format!("W has {} rows for E⊗E′ = {de}⊗{de}", w.nrows())));
    }
    let sw = linalg::swap_operator(de, de) * w;
    let sign = if linalg::hs_re(&w.adjoint(), &sw) >= 0.0 { 1.0 } else { -1.0 };
    Ok((sign, linalg::max_abs(&(&sw - w * linalg::r(sign)))))
}

pub fn build_multisymmetric(w: &CMat, de: usize, xi: &CVec, n: usize) -> Result<MultiSymmetricState> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be ≥ 1".into()));
    }
    let (sign, res) = swap_sign(w, de)?;
    if res > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(res));
    }
    let dgp = w.ncols();
    let dgp_n = dgp.pow(n as u32);
    if xi.len() % dgp_n != 0 {
        return Err(Error::Shape(format!("ξ of length {} for |G′|^n = {dgp_n}", xi.len())));
    }
    let dg_n = xi.len() / dgp_n;
    let dg = (dg_n as f64).powf(1.0 / n as f64).round() as usize;
    if dg.pow(n as u32) != dg_n {
        return Err(Error::Shape(format!("|G|^n = {dg_n} is not an n-th power")));
    }
    let total = dg_n * (de * de).pow(n as u32);
    if total > psc_matqi::MAX_DIM {
        return Err(psc_matqi::Error::DimensionGuard(total).into());
    }
    let wn = linalg::kron_all(&vec![w; n]);
    let raw = linalg::kron(&linalg::eye(dg_n), &wn) * xi;
    // (G…)(E₁E′₁)(E₂E′₂)… → G^n E^n E′^n
    let mut dims = vec![dg; n];
    dims.extend(std::iter::repeat_n(de, 2 * n));
    let perm: Vec<usize> = (0..n).chain((0..n).map(|i| n + 2 * i)).chain((0..n).map(|i| n + 2 * i + 1)).collect();
    let psi = linalg::permute_vec(&raw, &dims, &perm);
    let mut state = MultiSymmetricState { psi, n, dim_g: dg, dim_e: de, sign, generator_residuals: vec![] };
    state.generator_residuals = (0..n).map(|i| state.subset_residual(&[i])).collect();
    Ok(state)
}

/// ψ built from an extracted symmetric channel with ξ = χ^{⊗n}.
pub fn from_extraction(ext: &SymmetricExtraction, n: usize) -> Result<MultiSymmetricState> {
    let de = (ext.w.nrows() as f64).sqrt().round() as usize;
    let g = ext.dim_g();
    let chi = ext.chi_vector();
    let chin = (1..n).fold(chi.clone(), |acc, _| linalg::kron_vec(&acc, &chi));
    // (G₁G′₁)(G₂G′₂)… → G^n G′^n
    let perm: Vec<usize> = (0..n).map(|i| 2 * i).chain((0..n).map(|i| 2 * i + 1)).collect();
    let xi = linalg::permute_vec(&chin, &vec![g; 2 * n], &perm);
    build_multisymmetric(&ext.w, de, &xi, n)
}
