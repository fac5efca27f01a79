use psc_matqi::linalg::{self, CMat};
use psc_matqi::metrics::generalized_inverse_lognorm_raw;
use psc_sdp::{invariant_complex_basis, invariant_hermitian_basis};

use crate::minmax::{complement_marginal, smooth_core, SdpEntropy, SmoothBases};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct AepParams {
    pub mu_b: f64,
    pub mu_c: f64,
    pub n: usize,
    pub eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AepSide {
    MinLower,
    MaxUpper,
}

/// n·S(A|B) ∓ (μ_B + μ_C)·√(n ln(2/ε)).
pub fn aep_bound(p: &AepParams, s_cond: f64, side: AepSide) -> Result<f64> {
    if !(p.eps > 0.0 && p.eps < 1.0) {
        return Err(Error::InvalidParameter(format!("ε must lie in (0,1), got {}", p.eps)));
    }
    if p.n == 0 || p.mu_b < 0.0 || p.mu_c < 0.0 {
        return Err(Error::InvalidParameter("AEP needs n ≥ 1 and μ ≥ 0".into()));
    }
    let n = p.n as f64;
    let corr = (p.mu_b + p.mu_c) * (n * (2.0 / p.eps).ln()).sqrt();
    Ok(match side {
        AepSide::MinLower => n * s_cond - corr,
        AepSide::MaxUpper => n * s_cond + corr,
    })
}

/// μ_B, μ_C and S(A|B) for ρ^{AB} and its canonical purification on ABC.
pub fn aep_constants(rho: &CMat, da: usize, db: usize) -> Result<(f64, f64, f64)> {
    let (v, rc) = linalg::purify(rho);
    let rb = linalg::ptrace_pure(&v, &[da, db, rc], &[1]);
    let rcm = linalg::ptrace_pure(&v, &[da, db, rc], &[2]);
    let s = linalg::von_neumann_raw(rho) - linalg::von_neumann_raw(&rb);
    Ok((generalized_inverse_lognorm_raw(&rb)?, generalized_inverse_lognorm_raw(&rcm)?, s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone)]
pub struct TypicalProjector {
    pub projector: CMat,
    /// Tr ρ^{⊗n} P.
    pub weight: f64,
    /// 1 − exp(−2Δ²/μ²).
    pub hoeffding: f64,
    pub mu: f64,
}

/// Projector onto eigenstrings x^n of ρ^{⊗n} with Σ −log λ_{x_i} ≤ nS + Δ√n (Plus) or ≥ nS − Δ√n (Minus),
/// restricted to the support of ρ^{⊗n}.
pub fn typical_projector(rho: &CMat, n: usize, delta: f64, sign: Sign) -> Result<TypicalProjector> {
    let d = rho.nrows();
    let total = (d as f64).powi(n as i32);
    if n == 0 || total > psc_matqi::MAX_DIM as f64 {
        return Err(psc_matqi::Error::DimensionGuard(total as usize).into());
    }
    if delta < 0.0 {
        return Err(Error::InvalidParameter("Δ must be non-negative".into()));
    }
    let t = linalg::trace(rho).re;
    if (t - 1.0).abs() > psc_matqi::TOL {
        return Err(Error::NotNormalized);
    }
    let (lam, v) = linalg::support(rho);
    let mu = generalized_inverse_lognorm_raw(rho)?;
    let s: f64 = linalg::entropy_of(&lam);
    let k = lam.len();
    let nf = n as f64;
    let (lo, hi) = match sign {
        Sign::Plus => (f64::NEG_INFINITY, nf * s + delta * nf.sqrt()),
        Sign::Minus => (nf * s - delta * nf.sqrt(), f64::INFINITY),
    };
    let vn = linalg::kron_all(&vec![&v; n]);
    let mut keep = vec![];
    let mut weight = 0.0;
    for idx in 0..k.pow(n as u32) {
        let mut rest = idx;
        let mut info = 0.0;
        let mut prob = 1.0;
        for _ in 0..n {
            let x = rest % k;
            rest /= k;
            info -= lam[x].log2();
            prob *= lam[x];
        }
        // slack for the boundary strings
        if info <= hi + 1e-12 && info >= lo - 1e-12 {
            keep.push(idx);
            weight += prob;
        }
    }
    let mut sel = linalg::zeros(vn.nrows(), keep.len());
    for (c, &i) in keep.iter().enumerate() {
        sel.set_column(c, &vn.column(i));
    }
    let projector = &sel * sel.adjoint();
    let hoeffding = if mu > 0.0 { 1.0 - (-2.0 * delta * delta / (mu * mu)).exp() } else { 1.0 };
    Ok(TypicalProjector { projector, weight, hoeffding, mu })
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Index maps of the site permutations acting on `groups` blocks of n factors each.
pub fn site_permutation_maps(block_dims: &[usize], n: usize) -> Vec<Vec<usize>> {
    let dims: Vec<usize> = block_dims.iter().flat_map(|&d| std::iter::repeat_n(d, n)).collect();
    permutations(n)
        .into_iter()
        .map(|pi| {
            let perm: Vec<usize> = (0..block_dims.len()).flat_map(|b| pi.iter().map(move |&p| b * n + p)).collect();
            linalg::permutation_indices(&dims, &perm)
        })
        .collect()
}

/// H^ε_min(A^n|B^n) of ρ^{⊗n}, solved exactly over permutation-invariant variables.
pub fn hmin_smooth_iid(rho: &CMat, da: usize, db: usize, n: usize, eps: f64) -> Result<SdpEntropy> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("ε must lie in (0,1), got {eps}")));
    }
    let dn = (da * db).pow(n as u32);
    if n == 0 || dn > 256 {
        return Err(psc_matqi::Error::DimensionGuard(dn).into());
    }
    linalg::check_psd(rho)?;
    let (lam1, v1) = linalg::support(rho);
    let r1 = lam1.len();
    let vk = linalg::kron_all(&vec![&v1; n]);
    // rows of V^{⊗n} are ordered A1 B1 A2 B2 …; regroup as A^n B^n
    let inter: Vec<usize> = (0..n).flat_map(|_| [da, db]).collect();
    let regroup: Vec<usize> = (0..n).map(|k| 2 * k).chain((0..n).map(|k| 2 * k + 1)).collect();
    let p = linalg::permutation_indices(&inter, &regroup);
    let v = CMat::from_fn(dn, vk.ncols(), |i, j| vk[(p[i], j)]);
    let mut lam = vec![1.0];
    for _ in 0..n {
        lam = lam.iter().flat_map(|&a| lam1.iter().map(move |&b| a * b)).collect();
    }
    let rows = site_permutation_maps(&[da, db], n);
    let sig = site_permutation_maps(&[db], n);
    let cols = site_permutation_maps(&[r1], n);
    let bases = SmoothBases {
        rho: Some(invariant_hermitian_basis(dn, &rows)),
        sigma: Some(invariant_hermitian_basis(db.pow(n as u32), &sig)),
        w: Some(invariant_complex_basis(dn, cols[0].len(), &rows, &cols)),
    };
    let tr = linalg::trace(rho).re.powi(n as i32);
    smooth_core(&v, &lam, tr, da.pow(n as u32), db.pow(n as u32), eps, &bases)
}

/// H^ε_max(A^n|B^n) of ρ^{⊗n} = −H^ε_min(A^n|C^n) of the purification.
pub fn hmax_smooth_iid(rho: &CMat, da: usize, db: usize, n: usize, eps: f64) -> Result<SdpEntropy> {
    let (rac, rc) = complement_marginal(rho, da, db);
    let h = hmin_smooth_iid(&rac, da, rc, n, eps)?;
    Ok(SdpEntropy { value: -h.value, ..h })
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn site_maps_form_a_group_action() {
        let maps = site_permutation_maps(&[2, 3], 2);
        assert_eq!(maps.len(), 2);
        assert_eq!(maps[0], (0..36).collect::<Vec<_>>());
        let sw = &maps[1];
        for i in 0..36 {
            assert_eq!(sw[sw[i]], i);
        }
    }
}
