use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use psc_matqi::linalg::{self, c, r, CMat};

use crate::sparse::SpMat;
use crate::{Error, Result};

/// Real affine expression Σ a_i y_i + constant.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LExpr {
    pub constant: f64,
    pub terms: Vec<(usize, f64)>,
}

impl LExpr {
    pub fn constant(v: f64) -> Self {
        Self { constant: v, terms: vec![] }
    }

    pub fn value(&self, y: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(i, a)| a * y[i]).sum::<f64>()
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { constant: self.constant * a, terms: self.terms.iter().map(|&(i, v)| (i, v * a)).collect() }
    }

    pub(crate) fn merged(&self) -> Vec<(usize, f64)> {
        let mut t = self.terms.clone();
        t.sort_by_key(|x| x.0);
        let mut out: Vec<(usize, f64)> = vec![];
        for (i, a) in t {
            match out.last_mut() {
                Some(l) if l.0 == i => l.1 += a,
                _ => out.push((i, a)),
            }
        }
        out.retain(|x| x.1 != 0.0);
        out
    }
}

impl Add for LExpr {
    type Output = LExpr;
    fn add(mut self, o: LExpr) -> LExpr {
        self.constant += o.constant;
        self.terms.extend(o.terms);
        self
    }
}

impl Sub for LExpr {
    type Output = LExpr;
    fn sub(self, o: LExpr) -> LExpr {
        self + o.scale(-1.0)
    }
}

impl Neg for LExpr {
    type Output = LExpr;
    fn neg(self) -> LExpr {
        self.scale(-1.0)
    }
}

impl Mul<f64> for LExpr {
    type Output = LExpr;
    fn mul(self, a: f64) -> LExpr {
        self.scale(a)
    }
}

impl Add<f64> for LExpr {
    type Output = LExpr;
    fn add(mut self, a: f64) -> LExpr {
        self.constant += a;
        self
    }
}

/// Affine complex matrix expression constant + Σ y_i M_i with sparse coefficients.
#[derive(Debug, Clone)]
pub struct MExpr {
    pub rows: usize,
    pub cols: usize,
    pub constant: SpMat,
    pub terms: Vec<(usize, SpMat)>,
}

impl MExpr {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, constant: SpMat::zeros(rows, cols), terms: vec![] }
    }

    pub fn constant(m: &CMat) -> Self {
        Self { rows: m.nrows(), cols: m.ncols(), constant: SpMat::from_dense(m), terms: vec![] }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(&linalg::eye(n))
    }

    fn map(&self, rows: usize, cols: usize, f: impl Fn(&SpMat) -> SpMat) -> Self {
        Self {
            rows,
            cols,
            constant: f(&self.constant),
            terms: self.terms.iter().map(|(i, m)| (*i, f(m))).collect(),
        }
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::Shape(format!("{}x{} vs {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut out = self.clone();
        out.constant.entries.extend(o.constant.entries.iter().cloned());
        out.terms.extend(o.terms.iter().cloned());
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(self.rows, self.cols, |m| m.scale(r(a)))
    }

    pub fn adjoint(&self) -> Self {
        self.map(self.cols, self.rows, |m| m.adjoint())
    }

    pub fn kron_left_eye(&self, d: usize) -> Self {
        self.map(self.rows * d, self.cols * d, |m| m.kron_left_eye(d))
    }

    pub fn kron_right_eye(&self, d: usize) -> Self {
        self.map(self.rows * d, self.cols * d, |m| m.kron_right_eye(d))
    }

    pub fn kron_left(&self, a: &CMat) -> Self {
        self.map(self.rows * a.nrows(), self.cols * a.ncols(), |m| m.kron_left(a))
    }

    pub fn kron_right(&self, b: &CMat) -> Self {
        self.map(self.rows * b.nrows(), self.cols * b.ncols(), |m| m.kron_right(b))
    }

    pub fn permute(&self, dims: &[usize], perm: &[usize]) -> Self {
        self.map(self.rows, self.cols, |m| m.permute(dims, perm))
    }

    pub fn ptrace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != self.rows || self.rows != self.cols {
            return Err(Error::Shape(format!("partial trace of {}x{} over dims {dims:?}", self.rows, self.cols)));
        }
        let dk = keep.iter().map(|&k| dims[k]).product();
        Ok(self.map(dk, dk, |m| m.ptrace(dims, keep)))
    }

    /// K · self · K† with the result stored densely per term.
    pub fn conjugate_by(&self, k: &CMat) -> Self {
        let n = k.nrows();
        self.map(n, n, |m| SpMat::from_dense(&m.conjugate_by(k)))
    }

    /// 1×1 matrix expression from a scalar expression.
    pub fn from_lexpr(e: &LExpr) -> Self {
        let constant = if e.constant != 0.0 { SpMat::single(1, 1, 0, 0, r(e.constant)) } else { SpMat::zeros(1, 1) };
        Self { rows: 1, cols: 1, constant, terms: e.terms.iter().map(|&(i, a)| (i, SpMat::single(1, 1, 0, 0, r(a)))).collect() }
    }

    /// [[a, b], [b†, d]].
    pub fn block2(a: &Self, b: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || d.cols != b.cols || a.rows != a.cols || d.rows != d.cols {
            return Err(Error::Shape("inconsistent 2x2 block sizes".into()));
        }
        let n = a.rows + d.rows;
        let p = a.rows;
        let bd = b.adjoint();
        let mut out = a.map(n, n, |m| m.embed(n, n, 0, 0));
        for (x, r0, c0) in [(b, 0, p), (&bd, p, 0), (d, p, p)] {
            let e = x.map(n, n, |m| m.embed(n, n, r0, c0));
            out = out.add(&e)?;
        }
        Ok(out)
    }

    /// Block diagonal a ⊕ b.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let n = a.rows + b.rows;
        let m = a.cols + b.cols;
        let mut out = a.map(n, m, |x| x.embed(n, m, 0, 0));
        let e = b.map(n, m, |x| x.embed(n, m, a.rows, a.cols));
        out.constant.entries.extend(e.constant.entries);
        out.terms.extend(e.terms);
        out
    }

    /// Real part of the trace.
    pub fn trace(&self) -> LExpr {
        LExpr {
            constant: self.constant.trace().re,
            terms: self.terms.iter().map(|(i, m)| (*i, m.trace().re)).filter(|x| x.1 != 0.0).collect(),
        }
    }

    /// Re Tr(K† · self) = Re Σ conj(K_ij) M_ij.
    pub fn re_inner(&self, k: &CMat) -> LExpr {
        let f = |m: &SpMat| -> f64 { m.entries.iter().map(|&(i, j, v)| (k[(i, j)].conj() * v).re).sum() };
        LExpr {
            constant: f(&self.constant),
            terms: self.terms.iter().map(|(i, m)| (*i, f(m))).filter(|x| x.1 != 0.0).collect(),
        }
    }

    /// Real part of a single entry.
    pub fn re_entry(&self, i: usize, j: usize) -> LExpr {
        self.re_inner(&{
            let mut k = linalg::zeros(self.rows, self.cols);
            k[(i, j)] = r(1.0);
            k
        })
    }

    pub fn value(&self, y: &[f64]) -> CMat {
        let mut m = self.constant.to_dense();
        for (i, t) in &self.terms {
            for &(a, b, v) in &t.entries {
                m[(a, b)] += v * y[*i];
            }
        }
        m
    }

    /// Merges duplicate variables and entries.
    pub fn compressed(&self) -> Self {
        let mut terms = self.terms.clone();
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(usize, SpMat)> = vec![];
        for (i, m) in terms {
            match out.last_mut() {
                Some(l) if l.0 == i => l.1.entries.extend(m.entries),
                _ => out.push((i, m)),
            }
        }
        let terms = out
            .into_iter()
            .map(|(i, m)| (i, m.compress()))
            .filter(|(_, m)| m.nnz() > 0)
            .collect();
        Self { rows: self.rows, cols: self.cols, constant: self.constant.clone().compress(), terms }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarVar {
    pub index: usize,
}

impl ScalarVar {
    pub fn expr(&self) -> LExpr {
        LExpr { constant: 0.0, terms: vec![(self.index, 1.0)] }
    }

    pub fn value(&self, y: &[f64]) -> f64 {
        y[self.index]
    }
}

/// Hermitian matrix variable Σ_k y_{offset+k} B_k.
#[derive(Debug, Clone)]
pub struct HermVar {
    pub offset: usize,
    pub dim: usize,
    pub basis: Arc<Vec<SpMat>>,
}

/// Complex rectangular matrix variable Σ_k y_{offset+k} B_k.
#[derive(Debug, Clone)]
pub struct MatVar {
    pub offset: usize,
    pub rows: usize,
    pub cols: usize,
    pub basis: Arc<Vec<SpMat>>,
}

/// Real-coefficient basis of Hermitian d×d matrices: E_kk, E_kl+E_lk, i(E_kl−E_lk) for k<l.
pub fn hermitian_basis(d: usize) -> Vec<SpMat> {
    let mut b = Vec::with_capacity(d * d);
    for k in 0..d {
        b.push(SpMat::single(d, d, k, k, r(1.0)));
    }
    for k in 0..d {
        for l in k + 1..d {
            b.push(SpMat { rows: d, cols: d, entries: vec![(k, l, r(1.0)), (l, k, r(1.0))] });
            b.push(SpMat { rows: d, cols: d, entries: vec![(k, l, c(0.0, 1.0)), (l, k, c(0.0, -1.0))] });
        }
    }
    b
}

/// Real-coefficient basis of complex rows×cols matrices: E_ab, iE_ab.
pub fn complex_basis(rows: usize, cols: usize) -> Vec<SpMat> {
    let mut b = Vec::with_capacity(2 * rows * cols);
    for a in 0..rows {
        for bb in 0..cols {
            b.push(SpMat::single(rows, cols, a, bb, r(1.0)));
            b.push(SpMat::single(rows, cols, a, bb, c(0.0, 1.0)));
        }
    }
    b
}

/// Real basis of the Hermitian d×d matrices fixed by M ↦ P_g M P_g† for every g in `group`.
/// Each group element is given as an index map i ↦ g[i]; the list must be closed under composition.
pub fn invariant_hermitian_basis(d: usize, group: &[Vec<usize>]) -> Vec<SpMat> {
    let orbits = pair_orbits(d, d, group, group);
    let mut id = vec![usize::MAX; d * d];
    for (k, o) in orbits.iter().enumerate() {
        for &(i, j) in o {
            id[i * d + j] = k;
        }
    }
    let mut b = vec![];
    for (k, o) in orbits.iter().enumerate() {
        let (i0, j0) = o[0];
        let t = id[j0 * d + i0];
        if t < k {
            continue;
        }
        let mut re = vec![];
        let mut im = vec![];
        for &(i, j) in o {
            re.push((i, j, r(1.0)));
            re.push((j, i, r(1.0)));
            im.push((i, j, c(0.0, 1.0)));
            im.push((j, i, c(0.0, -1.0)));
        }
        b.push(SpMat { rows: d, cols: d, entries: re }.compress());
        if t != k {
            b.push(SpMat { rows: d, cols: d, entries: im }.compress());
        }
    }
    b
}

/// Real basis of the complex rows×cols matrices with P_g M Q_g† = M, where the group acts by
/// `row_group[k]` on rows and `col_group[k]` on columns.
pub fn invariant_complex_basis(rows: usize, cols: usize, row_group: &[Vec<usize>], col_group: &[Vec<usize>]) -> Vec<SpMat> {
    let mut b = vec![];
    for o in pair_orbits(rows, cols, row_group, col_group) {
        b.push(SpMat { rows, cols, entries: o.iter().map(|&(i, j)| (i, j, r(1.0))).collect() });
        b.push(SpMat { rows, cols, entries: o.iter().map(|&(i, j)| (i, j, c(0.0, 1.0))).collect() });
    }
    b
}

fn pair_orbits(rows: usize, cols: usize, gr: &[Vec<usize>], gc: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    assert_eq!(gr.len(), gc.len());
    let mut seen = vec![false; rows * cols];
    let mut out = vec![];
    for i in 0..rows {
        for j in 0..cols {
            if seen[i * cols + j] {
                continue;
            }
            let mut o = vec![];
            for (a, bb) in gr.iter().zip(gc) {
                let (x, y) = (a[i], bb[j]);
                if !seen[x * cols + y] {
                    seen[x * cols + y] = true;
                    o.push((x, y));
                }
            }
            if o.is_empty() {
                o.push((i, j));
                seen[i * cols + j] = true;
            }
            o.sort_unstable();
            out.push(o);
        }
    }
    out
}

fn basis_expr(offset: usize, rows: usize, cols: usize, basis: &[SpMat]) -> MExpr {
    MExpr {
        rows,
        cols,
        constant: SpMat::zeros(rows, cols),
        terms: basis.iter().enumerate().map(|(k, b)| (offset + k, b.clone())).collect(),
    }
}

fn basis_value(offset: usize, rows: usize, cols: usize, basis: &[SpMat], y: &[f64]) -> CMat {
    let mut m = linalg::zeros(rows, cols);
    for (k, b) in basis.iter().enumerate() {
        let v = y[offset + k];
        if v != 0.0 {
            for &(i, j, x) in &b.entries {
                m[(i, j)] += x * v;
            }
        }
    }
    m
}

impl HermVar {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn expr(&self) -> MExpr {
        basis_expr(self.offset, self.dim, self.dim, &self.basis)
    }

    pub fn value(&self, y: &[f64]) -> CMat {
        basis_value(self.offset, self.dim, self.dim, &self.basis, y)
    }

    /// Coordinates of a Hermitian matrix in the standard basis (only valid for the default basis).
    pub fn coordinates_standard(m: &CMat) -> Vec<f64> {
        let d = m.nrows();
        let mut y = Vec::with_capacity(d * d);
        for k in 0..d {
            y.push(m[(k, k)].re);
        }
        for k in 0..d {
            for l in k + 1..d {
                y.push(m[(k, l)].re);
                y.push(m[(k, l)].im);
            }
        }
        y
    }

    /// Writes the standard-basis coordinates of `m` into a full variable vector.
    pub fn assign(&self, y: &mut [f64], m: &CMat) {
        let coords = Self::coordinates_standard(m);
        y[self.offset..self.offset + coords.len()].copy_from_slice(&coords);
    }
}

impl MatVar {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn expr(&self) -> MExpr {
        basis_expr(self.offset, self.rows, self.cols, &self.basis)
    }

    pub fn value(&self, y: &[f64]) -> CMat {
        basis_value(self.offset, self.rows, self.cols, &self.basis, y)
    }

    pub fn assign(&self, y: &mut [f64], m: &CMat) {
        let mut k = self.offset;
        for a in 0..self.rows {
            for b in 0..self.cols {
                y[k] = m[(a, b)].re;
                y[k + 1] = m[(a, b)].im;
                k += 2;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use psc_matqi::linalg::max_abs;

    #[test]
    fn hermitian_coordinates_roundtrip() {
        let m = CMat::from_fn(3, 3, |i, j| {
            if i == j {
                r(i as f64)
            } else if i < j {
                c(0.5, (i + j) as f64)
            } else {
                c(0.5, -((i + j) as f64))
            }
        });
        let var = HermVar { offset: 0, dim: 3, basis: Arc::new(hermitian_basis(3)) };
        let y = HermVar::coordinates_standard(&m);
        assert!(max_abs(&(var.value(&y) - m)) < 1e-15);
    }

    #[test]
    fn block_and_trace() {
        let var = HermVar { offset: 0, dim: 2, basis: Arc::new(hermitian_basis(2)) };
        let w = MatVar { offset: 4, rows: 2, cols: 1, basis: Arc::new(complex_basis(2, 1)) };
        let lam = MExpr::constant(&CMat::from_element(1, 1, r(0.5)));
        let blk = MExpr::block2(&var.expr(), &w.expr(), &lam).unwrap();
        let y = vec![1.0, 2.0, 0.1, 0.2, 0.3, -0.4, 0.5, 0.6];
        let v = blk.value(&y);
        assert!(max_abs(&(&v - v.adjoint())) < 1e-15);
        assert!((blk.trace().value(&y) - 3.5).abs() < 1e-15);
        assert_eq!(v[(0, 2)], c(0.3, -0.4));
        assert_eq!(v[(2, 1)], c(0.5, -0.6));
    }
}
