use crate::linalg;
use crate::state::DensityOperator;
use crate::{Error, Result};

fn same_space(a: &DensityOperator, b: &DensityOperator) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.dims(), b.dims())));
    }
    Ok(())
}

/// Generalized fidelity ‖√ρ√σ‖₁ + √((1−Tr ρ)(1−Tr σ)).
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_space(rho, sigma)?;
    Ok(linalg::fidelity_raw(rho.matrix(), sigma.matrix()))
}

pub fn purified_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let f = fidelity(rho, sigma)?;
    Ok((1.0 - f * f).max(0.0).sqrt())
}

/// ½‖ρ−σ‖₁.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_space(rho, sigma)?;
    Ok(0.5 * linalg::trace_norm_herm(&(rho.matrix() - sigma.matrix())))
}

/// log of the inverse of the smallest nonzero eigenvalue.
pub fn generalized_inverse_lognorm(rho: &DensityOperator) -> Result<f64> {
    generalized_inverse_lognorm_raw(rho.matrix())
}

pub fn generalized_inverse_lognorm_raw(m: &crate::CMat) -> Result<f64> {
    let (vals, _) = linalg::support(m);
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if vals.is_empty() {
        return Err(Error::ZeroOperator);
    }
    Ok(-min.log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, proj, r, CMat, CVec};
    use crate::SystemLabel;

    fn st(m: CMat) -> DensityOperator {
        DensityOperator::single(m, "A").unwrap()
    }

    fn ket0() -> CMat {
        proj(&CVec::from_vec(vec![r(1.0), r(0.0)]))
    }

    fn ketplus() -> CMat {
        let a = 1.0 / 2f64.sqrt();
        proj(&CVec::from_vec(vec![r(a), r(a)]))
    }

    #[test]
    fn fidelity_examples() {
        let z = st(ket0());
        let one = st(proj(&CVec::from_vec(vec![r(0.0), r(1.0)])));
        let p = st(ketplus());
        assert!((fidelity(&z, &z).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&z, &one).unwrap().abs() < 1e-12);
        // |⟨0|+⟩| = 2^{-1/2}
        assert!((fidelity(&z, &p).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        let half = st(ket0() * r(0.5));
        assert!((fidelity(&half, &z).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((fidelity(&z, &half).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn distance_examples() {
        let z = st(ket0());
        let p = st(ketplus());
        assert!((purified_distance(&z, &p).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(purified_distance(&z, &z).unwrap() < 1e-6);
        // ρ−σ = ½[[1,−1],[−1,−1]] has eigenvalues ±1/√2
        assert!((trace_distance(&z, &p).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        let one = st(proj(&CVec::from_vec(vec![r(0.0), r(1.0)])));
        assert!((trace_distance(&z, &one).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lognorm_examples() {
        let mixed = DensityOperator::maximally_mixed(SystemLabel::of("A", 2));
        assert!((generalized_inverse_lognorm(&mixed).unwrap() - 1.0).abs() < 1e-12);
        assert!(generalized_inverse_lognorm(&st(ket0())).unwrap().abs() < 1e-12);
        let d = st(CMat::from_diagonal(&CVec::from_vec(vec![r(0.9), r(0.1)])));
        assert!((generalized_inverse_lognorm(&d).unwrap() - 10f64.log2()).abs() < 1e-12);
        let zero = st(CMat::zeros(2, 2));
        assert!(matches!(generalized_inverse_lognorm(&zero), Err(Error::ZeroOperator)));
        let _ = c(0.0, 0.0);
    }

    #[test]
    fn mismatch_is_error() {
        let a = DensityOperator::maximally_mixed(SystemLabel::of("A", 2));
        let b = DensityOperator::maximally_mixed(SystemLabel::of("A", 3));
        assert!(fidelity(&a, &b).is_err());
        assert!(trace_distance(&a, &b).is_err());
    }
}
