use psc_matqi::linalg::{self, CMat, C64};

/// Coordinate-format complex matrix. Entries may repeat until [`SpMat::compress`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpMat {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, C64)>,
}

impl SpMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![] }
    }

    pub fn single(rows: usize, cols: usize, i: usize, j: usize, v: C64) -> Self {
        Self { rows, cols, entries: vec![(i, j, v)] }
    }

    pub fn from_dense(m: &CMat) -> Self {
        let mut entries = vec![];
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if m[(i, j)] != C64::new(0.0, 0.0) {
                    entries.push((i, j, m[(i, j)]));
                }
            }
        }
        Self { rows: m.nrows(), cols: m.ncols(), entries }
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = linalg::zeros(self.rows, self.cols);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn compress(mut self) -> Self {
        self.entries.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        let mut out: Vec<(usize, usize, C64)> = Vec::with_capacity(self.entries.len());
        for e in self.entries {
            match out.last_mut() {
                Some(last) if last.0 == e.0 && last.1 == e.1 => last.2 += e.2,
                _ => out.push(e),
            }
        }
        out.retain(|e| e.2.norm() > 0.0);
        Self { rows: self.rows, cols: self.cols, entries: out }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|&(i, j, v)| (j, i, v.conj())).collect(),
        }
    }

    pub fn scale(&self, a: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|&(i, j, v)| (i, j, v * a)).collect() }
    }

    /// 1_d ⊗ self.
    pub fn kron_left_eye(&self, d: usize) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len() * d);
        for k in 0..d {
            for &(i, j, v) in &self.entries {
                entries.push((k * self.rows + i, k * self.cols + j, v));
            }
        }
        Self { rows: self.rows * d, cols: self.cols * d, entries }
    }

    /// self ⊗ 1_d.
    pub fn kron_right_eye(&self, d: usize) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len() * d);
        for &(i, j, v) in &self.entries {
            for k in 0..d {
                entries.push((i * d + k, j * d + k, v));
            }
        }
        Self { rows: self.rows * d, cols: self.cols * d, entries }
    }

    /// a ⊗ self for a dense left factor.
    pub fn kron_left(&self, a: &CMat) -> Self {
        let mut entries = vec![];
        for ac in 0..a.ncols() {
            for ar in 0..a.nrows() {
                let x = a[(ar, ac)];
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                for &(i, j, v) in &self.entries {
                    entries.push((ar * self.rows + i, ac * self.cols + j, x * v));
                }
            }
        }
        Self { rows: self.rows * a.nrows(), cols: self.cols * a.ncols(), entries }
    }

    /// self ⊗ b for a dense right factor.
    pub fn kron_right(&self, b: &CMat) -> Self {
        let mut entries = vec![];
        for &(i, j, v) in &self.entries {
            for bc in 0..b.ncols() {
                for br in 0..b.nrows() {
                    let x = b[(br, bc)];
                    if x != C64::new(0.0, 0.0) {
                        entries.push((i * b.nrows() + br, j * b.ncols() + bc, v * x));
                    }
                }
            }
        }
        Self { rows: self.rows * b.nrows(), cols: self.cols * b.ncols(), entries }
    }

    /// Reorders tensor factors of a square operator (same convention as `linalg::permute_op`).
    pub fn permute(&self, dims: &[usize], perm: &[usize]) -> Self {
        let p = linalg::permutation_indices(dims, perm);
        let mut inv = vec![0; p.len()];
        for (new, &old) in p.iter().enumerate() {
            inv[old] = new;
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&(i, j, v)| (inv[i], inv[j], v)).collect(),
        }
    }

    /// Partial trace of a square operator, keeping the listed factors in order.
    pub fn ptrace(&self, dims: &[usize], keep: &[usize]) -> Self {
        let mut perm: Vec<usize> = keep.to_vec();
        for k in 0..dims.len() {
            if !keep.contains(&k) {
                perm.push(k);
            }
        }
        let total: usize = dims.iter().product();
        let dk: usize = keep.iter().map(|&k| dims[k]).product();
        let dt = total / dk;
        let pm = self.permute(dims, &perm);
        let entries = pm
            .entries
            .into_iter()
            .filter(|&(i, j, _)| i % dt == j % dt)
            .map(|(i, j, v)| (i / dt, j / dt, v))
            .collect();
        Self { rows: dk, cols: dk, entries }.compress()
    }

    /// Places the matrix at offset (r0, c0) inside a rows × cols zero matrix.
    pub fn embed(&self, rows: usize, cols: usize, r0: usize, c0: usize) -> Self {
        Self {
            rows,
            cols,
            entries: self.entries.iter().map(|&(i, j, v)| (i + r0, j + c0, v)).collect(),
        }
    }

    /// Conjugation K · self · K† for a dense K.
    pub fn conjugate_by(&self, k: &CMat) -> CMat {
        let mut out = linalg::zeros(k.nrows(), k.nrows());
        for &(i, j, v) in &self.entries {
            for a in 0..k.nrows() {
                let ka = k[(a, i)] * v;
                if ka == C64::new(0.0, 0.0) {
                    continue;
                }
                for b in 0..k.nrows() {
                    out[(a, b)] += ka * k[(b, j)].conj();
                }
            }
        }
        out
    }

    /// Re Tr(self · Z).
    pub fn re_trace_with(&self, z: &CMat) -> f64 {
        self.entries.iter().map(|&(i, j, v)| (v * z[(j, i)]).re).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let d = self.to_dense();
        linalg::max_abs(&(&d - d.adjoint())) <= tol
    }

    pub fn trace(&self) -> C64 {
        self.entries.iter().filter(|e| e.0 == e.1).map(|e| e.2).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use psc_matqi::linalg::{c, kron, max_abs, ptrace};

    fn sample(n: usize) -> CMat {
        CMat::from_fn(n, n, |i, j| c((i * 3 + j) as f64 * 0.1, (i as f64) - (j as f64)))
    }

    #[test]
    fn kron_and_ptrace_match_dense() {
        let a = sample(3);
        let s = SpMat::from_dense(&a);
        let e2 = linalg::eye(2);
        assert!(max_abs(&(s.kron_left_eye(2).to_dense() - kron(&e2, &a))) < 1e-14);
        assert!(max_abs(&(s.kron_right_eye(2).to_dense() - kron(&a, &e2))) < 1e-14);
        let b = sample(2);
        assert!(max_abs(&(s.kron_left(&b).to_dense() - kron(&b, &a))) < 1e-14);
        assert!(max_abs(&(s.kron_right(&b).to_dense() - kron(&a, &b))) < 1e-14);
        let big = sample(12);
        let sb = SpMat::from_dense(&big);
        for keep in [vec![0], vec![2, 1], vec![1]] {
            let d1 = ptrace(&big, &[2, 3, 2], &keep);
            assert!(max_abs(&(sb.ptrace(&[2, 3, 2], &keep).to_dense() - d1)) < 1e-13);
        }
        let p = sb.permute(&[2, 3, 2], &[2, 0, 1]).to_dense();
        assert!(max_abs(&(p - linalg::permute_op(&big, &[2, 3, 2], &[2, 0, 1]))) < 1e-14);
    }

    #[test]
    fn conjugation_matches_dense() {
        let a = SpMat::from_dense(&sample(3));
        let k = CMat::from_fn(2, 3, |i, j| c(i as f64 + 0.5, j as f64 * 0.25));
        let d = &k * a.to_dense() * k.adjoint();
        assert!(max_abs(&(a.conjugate_by(&k) - d)) < 1e-13);
    }
}
