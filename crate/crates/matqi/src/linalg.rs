//! Raw-matrix routines. Tensor factors follow the Kronecker convention:
//! the last factor varies fastest.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result, EIG_CUTOFF, MAX_DIM, TOL};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()) * r(0.5)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_all(ms: &[&CMat]) -> CMat {
    let mut out = eye(1);
    for m in ms {
        out = out.kronecker(*m);
    }
    out
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    a.kronecker(b)
}

pub fn ket(d: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[i] = ONE;
    v
}

pub fn proj(v: &CVec) -> CMat {
    v * v.adjoint()
}

/// |Φ_d⟩ = d^{-1/2} Σ_i |ii⟩.
pub fn max_entangled(d: usize) -> CVec {
    let mut v = CVec::zeros(d * d);
    let a = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = r(a);
    }
    v
}

pub fn trace(m: &CMat) -> C64 {
    m.trace()
}

/// Re Tr(A B) for Hermitian A, B.
pub fn hs_re(a: &CMat, b: &CMat) -> f64 {
    let mut s = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let x = a[(i, j)] * b[(j, i)];
            s += x.re;
        }
    }
    s
}

/// Hermitian eigendecomposition with eigenvalues in ascending order.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (vec![], zeros(0, 0));
    }
    let eig = hermitize(m).symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = zeros(n, n);
    for (k, &i) in idx.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    let n = m.nrows();
    if n == 0 {
        return vec![];
    }
    let mut v: Vec<f64> = hermitize(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Spectral norm of a Hermitian matrix.
pub fn norm_herm(m: &CMat) -> f64 {
    eigvalsh(m).iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Spectral norm of a general matrix.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().fold(0.0, |a, &x| a.max(x))
}

pub fn trace_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().sum()
}

pub fn trace_norm_herm(m: &CMat) -> f64 {
    eigvalsh(m).iter().map(|x| x.abs()).sum()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.norm()))
}

/// V f(Λ) V† for Hermitian input.
pub fn funm(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = eigh(m);
    let mut scaled = vecs.clone();
    for (k, &l) in vals.iter().enumerate() {
        let fl = f(l);
        scaled.column_mut(k).scale_mut(fl);
    }
    scaled * vecs.adjoint()
}

fn cutoff(vals: &[f64]) -> f64 {
    let scale = vals.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    EIG_CUTOFF * scale
}

pub fn sqrtm_psd(m: &CMat) -> CMat {
    funm(m, |x| if x > 0.0 { x.sqrt() } else { 0.0 })
}

/// Generalized inverse f(λ) = 1/λ on eigenvalues above the relative cutoff.
pub fn pinv_herm(m: &CMat) -> CMat {
    let (vals, vecs) = eigh(m);
    let cut = cutoff(&vals);
    let mut scaled = vecs.clone();
    for (k, &l) in vals.iter().enumerate() {
        let fl = if l.abs() > cut && l != 0.0 { 1.0 / l } else { 0.0 };
        scaled.column_mut(k).scale_mut(fl);
    }
    scaled * vecs.adjoint()
}

/// Generalized inverse square root of a PSD operator.
pub fn pinv_sqrt_psd(m: &CMat) -> CMat {
    let (vals, vecs) = eigh(m);
    let cut = cutoff(&vals);
    let mut scaled = vecs.clone();
    for (k, &l) in vals.iter().enumerate() {
        let fl = if l > cut && l > 0.0 { 1.0 / l.sqrt() } else { 0.0 };
        scaled.column_mut(k).scale_mut(fl);
    }
    scaled * vecs.adjoint()
}

/// Eigenpairs spanning the support of a PSD operator: (positive eigenvalues, isometry onto the support).
pub fn support(m: &CMat) -> (Vec<f64>, CMat) {
    let (vals, vecs) = eigh(m);
    let cut = cutoff(&vals);
    let keep: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > cut && vals[k] > 0.0).collect();
    let mut v = zeros(m.nrows(), keep.len());
    for (c, &k) in keep.iter().enumerate() {
        v.set_column(c, &vecs.column(k));
    }
    (keep.iter().map(|&k| vals[k]).collect(), v)
}

pub fn support_projector(m: &CMat) -> CMat {
    let (_, v) = support(m);
    &v * v.adjoint()
}

/// Shannon entropy (base 2) of a list of eigenvalues; non-positive entries contribute 0.
pub fn entropy_of(vals: &[f64]) -> f64 {
    vals.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

pub fn von_neumann_raw(m: &CMat) -> f64 {
    entropy_of(&eigvalsh(m))
}

/// Fidelity ‖√ρ√σ‖₁ + √((1−Tr ρ)(1−Tr σ)) of raw PSD matrices.
pub fn fidelity_raw(rho: &CMat, sigma: &CMat) -> f64 {
    let sr = sqrtm_psd(rho);
    let inner = &sr * sigma * &sr;
    let main: f64 = eigvalsh(&inner).iter().map(|&x| x.max(0.0).sqrt()).sum();
    let tr = trace(rho).re;
    let ts = trace(sigma).re;
    let extra = ((1.0 - tr).max(0.0) * (1.0 - ts).max(0.0)).sqrt();
    (main + extra).min(1.0)
}

pub fn check_dim(d: usize) -> Result<()> {
    if d > MAX_DIM {
        Err(Error::DimensionGuard(d))
    } else {
        Ok(())
    }
}

/// Checks Hermiticity and positivity relative to the spectral norm.
pub fn check_psd(m: &CMat) -> Result<()> {
    let scale = max_abs(m).max(1.0);
    let dev = max_abs(&(m - m.adjoint()));
    if dev > TOL * scale {
        return Err(Error::NotHermitian(dev));
    }
    let vals = eigvalsh(m);
    let norm = vals.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    if let Some(&min) = vals.first() {
        if min < -TOL * norm {
            return Err(Error::NotPsd(min));
        }
    }
    Ok(())
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// For `perm[k]` = old position of the k-th new factor, returns the map new index -> old index.
pub fn permutation_indices(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    assert_eq!(dims.len(), perm.len());
    let total: usize = dims.iter().product();
    let old_s = strides(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_s = strides(&new_dims);
    (0..total)
        .map(|idx| {
            let mut old = 0;
            for k in 0..perm.len() {
                let digit = (idx / new_s[k]) % new_dims[k];
                old += digit * old_s[perm[k]];
            }
            old
        })
        .collect()
}

/// Reorders tensor factors of an operator.
pub fn permute_op(m: &CMat, dims: &[usize], perm: &[usize]) -> CMat {
    let p = permutation_indices(dims, perm);
    let n = p.len();
    CMat::from_fn(n, n, |i, j| m[(p[i], p[j])])
}

pub fn permute_vec(v: &CVec, dims: &[usize], perm: &[usize]) -> CVec {
    let p = permutation_indices(dims, perm);
    CVec::from_fn(p.len(), |i, _| v[p[i]])
}

/// Permutation operator P with P(|x_0⟩⊗…) = reordered product, matching `permute_vec`.
pub fn permutation_operator(dims: &[usize], perm: &[usize]) -> CMat {
    let p = permutation_indices(dims, perm);
    let n = p.len();
    let mut m = zeros(n, n);
    for (i, &o) in p.iter().enumerate() {
        m[(i, o)] = ONE;
    }
    m
}

/// SWAP on C^{d1} ⊗ C^{d2} -> C^{d2} ⊗ C^{d1}.
pub fn swap_operator(d1: usize, d2: usize) -> CMat {
    permutation_operator(&[d1, d2], &[1, 0])
}

/// Partial trace keeping the factors listed in `keep` (in that order).
pub fn ptrace(m: &CMat, dims: &[usize], keep: &[usize]) -> CMat {
    let mut perm: Vec<usize> = keep.to_vec();
    for k in 0..dims.len() {
        if !keep.contains(&k) {
            perm.push(k);
        }
    }
    let dk: usize = keep.iter().map(|&k| dims[k]).product();
    let total: usize = dims.iter().product();
    let dt = total / dk;
    let p = permutation_indices(dims, &perm);
    let mut out = zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut s = ZERO;
            for t in 0..dt {
                s += m[(p[a * dt + t], p[b * dt + t])];
            }
            out[(a, b)] = s;
        }
    }
    out
}

/// Reduced operator of a pure state vector on the kept factors.
pub fn ptrace_pure(v: &CVec, dims: &[usize], keep: &[usize]) -> CMat {
    let mut perm: Vec<usize> = keep.to_vec();
    for k in 0..dims.len() {
        if !keep.contains(&k) {
            perm.push(k);
        }
    }
    let dk: usize = keep.iter().map(|&k| dims[k]).product();
    let total: usize = dims.iter().product();
    let w = permute_vec(v, dims, &perm);
    let m = CMat::from_fn(dk, total / dk, |i, j| w[i * (total / dk) + j]);
    &m * m.adjoint()
}

/// Reshapes |ψ⟩ ∈ A⊗B into the dA × dB coefficient matrix.
pub fn vec_to_mat(v: &CVec, da: usize, db: usize) -> CMat {
    CMat::from_fn(da, db, |i, j| v[i * db + j])
}

pub fn mat_to_vec(m: &CMat) -> CVec {
    let (ra, cb) = m.shape();
    CVec::from_fn(ra * cb, |k, _| m[(k / cb, k % cb)])
}

/// Schmidt decomposition |ψ⟩ = Σ_k s_k |u_k⟩|w_k⟩, keeping s_k above the cutoff.
pub fn schmidt(v: &CVec, da: usize, db: usize) -> (Vec<f64>, CMat, CMat) {
    let m = vec_to_mat(v, da, db);
    let rho = &m * m.adjoint();
    let (vals, u) = support(&rho);
    let s: Vec<f64> = vals.iter().map(|x| x.sqrt()).collect();
    // w_k = (u_k† M)^T / s_k
    let mut w = zeros(db, s.len());
    for k in 0..s.len() {
        let row = u.column(k).adjoint() * &m;
        for j in 0..db {
            w[(j, k)] = row[(0, j)] / s[k];
        }
    }
    (s, u, w)
}

/// Canonical purification Σ_k √λ_k |v_k⟩ ⊗ |k⟩ of a PSD operator, purifying system dimension = rank.
pub fn purify(m: &CMat) -> (CVec, usize) {
    let (vals, vecs) = support(m);
    let d = m.nrows();
    let rk = vals.len().max(1);
    let mut out = CVec::zeros(d * rk);
    for (k, &l) in vals.iter().enumerate() {
        for i in 0..d {
            out[i * rk + k] = vecs[(i, k)] * l.sqrt();
        }
    }
    (out, rk)
}

/// Completes the orthonormal columns of `v` to a unitary.
pub fn complete_unitary(v: &CMat) -> CMat {
    let (n, k) = v.shape();
    let mut cols: Vec<CVec> = (0..k).map(|j| v.column(j).into_owned()).collect();
    let mut e = 0;
    while cols.len() < n && e < n {
        let mut cand = ket(n, e);
        for _ in 0..2 {
            for c in &cols {
                let ov = c.dotc(&cand);
                cand -= c * ov;
            }
        }
        let nn = cand.norm();
        if nn > 1e-6 {
            cols.push(cand / r(nn));
        }
        e += 1;
    }
    CMat::from_columns(&cols)
}

/// Orthonormal basis of the orthogonal complement of the column span of `v` (assumed orthonormal).
pub fn orth_complement(v: &CMat) -> CMat {
    let k = v.ncols();
    let u = complete_unitary(v);
    u.columns(k, u.ncols() - k).into_owned()
}

pub fn real_part_max(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.re.abs()))
}

pub fn binary_entropy(p: f64) -> f64 {
    entropy_of(&[p, 1.0 - p])
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ghz() -> CVec {
        let mut v = CVec::zeros(8);
        v[0] = r(1.0 / 2f64.sqrt());
        v[7] = r(1.0 / 2f64.sqrt());
        v
    }

    #[test]
    fn ptrace_of_ghz() {
        let rho = proj(&ghz());
        let ab = ptrace(&rho, &[2, 2, 2], &[0, 1]);
        let mut expect = zeros(4, 4);
        expect[(0, 0)] = r(0.5);
        expect[(3, 3)] = r(0.5);
        assert!(max_abs(&(ab - expect)) < 1e-15);
    }

    #[test]
    fn ptrace_pure_matches_mixed() {
        let v = CVec::from_fn(12, |i, _| c(i as f64, 1.0 - i as f64 * 0.3));
        let rho = proj(&v);
        for keep in [vec![0], vec![1], vec![2, 0], vec![1, 2]] {
            let a = ptrace(&rho, &[2, 3, 2], &keep);
            let b = ptrace_pure(&v, &[2, 3, 2], &keep);
            assert!(max_abs(&(a - b)) < 1e-10);
        }
    }

    #[test]
    fn permute_matches_kron_order() {
        let a = CMat::from_fn(2, 2, |i, j| c(i as f64 + 1.0, j as f64));
        let b = CMat::from_fn(3, 3, |i, j| c((i * j) as f64, 2.0));
        let ab = kron(&a, &b);
        let ba = permute_op(&ab, &[2, 3], &[1, 0]);
        assert!(max_abs(&(ba - kron(&b, &a))) < 1e-15);
        let s = swap_operator(2, 3);
        let conj = &s * kron(&a, &b) * s.adjoint();
        assert!(max_abs(&(conj - kron(&b, &a))) < 1e-15);
    }

    #[test]
    fn schmidt_reconstructs() {
        let v = CVec::from_fn(6, |i, _| c((i as f64).sin(), (i as f64 * 0.7).cos()));
        let v = &v / r(v.norm());
        let (s, u, w) = schmidt(&v, 2, 3);
        let mut back = CVec::zeros(6);
        for k in 0..s.len() {
            back += kron_vec(&u.column(k).into_owned(), &w.column(k).into_owned()) * r(s[k]);
        }
        assert!((back - v).norm() < 1e-12);
    }

    #[test]
    fn purification_marginal() {
        let m = CMat::from_row_slice(2, 2, &[r(0.7), c(0.1, 0.2), c(0.1, -0.2), r(0.3)]);
        let (p, rk) = purify(&m);
        let back = ptrace_pure(&p, &[2, rk], &[0]);
        assert!(max_abs(&(back - m)) < 1e-12);
    }

    #[test]
    fn pinv_on_support() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![r(0.9), r(0.0), r(0.1)]));
        let p = pinv_herm(&m);
        assert!((p[(0, 0)].re - 1.0 / 0.9).abs() < 1e-12);
        assert_eq!(p[(1, 1)].re, 0.0);
        assert!((p[(2, 2)].re - 10.0).abs() < 1e-9);
    }
}
