use crate::linalg::{self, r, CMat};
use crate::{Error, Result, MAX_DIM};

fn checked_pow(d: usize, n: usize) -> Result<usize> {
    let t = (0..n).fold(1usize, |t, _| t.saturating_mul(d));
    if t > MAX_DIM {
        return Err(Error::DimensionGuard(t));
    }
    Ok(t)
}

/// Orthonormal basis (columns) of Sym^n(C^d) ⊂ (C^d)^{⊗n}, one column per occupation type.
pub fn symmetric_basis(d: usize, n: usize) -> Result<CMat> {
    let total = checked_pow(d, n)?;
    let mut classes: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
    for idx in 0..total {
        let mut occ = vec![0usize; d];
        let mut x = idx;
        for _ in 0..n {
            occ[x % d] += 1;
            x /= d;
        }
        classes.entry(occ).or_default().push(idx);
    }
    let mut basis = linalg::zeros(total, classes.len());
    for (k, members) in classes.values().enumerate() {
        let a = 1.0 / (members.len() as f64).sqrt();
        for &i in members {
            basis[(i, k)] = r(a);
        }
    }
    Ok(basis)
}

/// Projector onto Sym^n(C^d) and its rank C(n+d−1, n).
pub fn symmetric_projector(d: usize, n: usize) -> Result<(CMat, usize)> {
    let b = symmetric_basis(d, n)?;
    let rank = b.ncols();
    Ok((&b * b.adjoint(), rank))
}
