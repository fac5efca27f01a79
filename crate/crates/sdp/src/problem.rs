use std::sync::Arc;

use psc_matqi::linalg::{self, CMat};
use psc_matqi::MAX_DIM;

use crate::expr::{complex_basis, hermitian_basis, HermVar, LExpr, MExpr, MatVar, ScalarVar};
use crate::sparse::SpMat;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Comparison of an affine scalar expression with its right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Cmp {
    Geq,
    Leq,
    Eq,
}

#[derive(Debug, Clone)]
pub(crate) struct Lmi {
    pub name: String,
    pub expr: MExpr,
}

#[derive(Debug, Clone)]
pub(crate) struct LinCon {
    pub name: String,
    /// expr (cmp) 0
    pub expr: LExpr,
    pub cmp: Cmp,
}

/// An SDP in affine form over real unknowns y.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub(crate) nvars: usize,
    pub(crate) objective: LExpr,
    pub(crate) sense: Sense,
    pub(crate) lmis: Vec<Lmi>,
    pub(crate) lin: Vec<LinCon>,
}

impl Default for SdpProblem {
    fn default() -> Self {
        Self::new()
    }
}

impl SdpProblem {
    pub fn new() -> Self {
        Self { nvars: 0, objective: LExpr::default(), sense: Sense::Maximize, lmis: vec![], lin: vec![] }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn lmi_dims(&self) -> Vec<usize> {
        self.lmis.iter().map(|l| l.expr.rows).collect()
    }

    pub fn lmi_names(&self) -> Vec<&str> {
        self.lmis.iter().map(|l| l.name.as_str()).collect()
    }

    pub fn constraint_names(&self) -> Vec<&str> {
        self.lin.iter().map(|l| l.name.as_str()).collect()
    }

    pub fn scalar_var(&mut self) -> ScalarVar {
        self.nvars += 1;
        ScalarVar { index: self.nvars - 1 }
    }

    pub fn herm_var(&mut self, dim: usize) -> HermVar {
        self.herm_var_with_basis(dim, hermitian_basis(dim))
    }

    /// Hermitian variable restricted to the real span of the given Hermitian basis.
    pub fn herm_var_with_basis(&mut self, dim: usize, basis: Vec<SpMat>) -> HermVar {
        let v = HermVar { offset: self.nvars, dim, basis: Arc::new(basis) };
        self.nvars += v.len();
        v
    }

    pub fn mat_var(&mut self, rows: usize, cols: usize) -> MatVar {
        self.mat_var_with_basis(rows, cols, complex_basis(rows, cols))
    }

    pub fn mat_var_with_basis(&mut self, rows: usize, cols: usize, basis: Vec<SpMat>) -> MatVar {
        let v = MatVar { offset: self.nvars, rows, cols, basis: Arc::new(basis) };
        self.nvars += v.len();
        v
    }

    /// Adds `expr ⪰ 0`; returns the index used for multiplier lookup.
    pub fn psd(&mut self, name: &str, expr: MExpr) -> Result<usize> {
        if expr.rows != expr.cols {
            return Err(Error::Shape(format!("LMI `{name}` is {}x{}", expr.rows, expr.cols)));
        }
        if expr.rows > MAX_DIM {
            return Err(Error::TooLarge(expr.rows));
        }
        let expr = expr.compressed();
        let scale = expr.constant.entries.iter().fold(1.0f64, |a, e| a.max(e.2.norm()));
        if !expr.constant.is_hermitian(1e-9 * scale) || expr.terms.iter().any(|(_, m)| !m.is_hermitian(1e-12)) {
            return Err(Error::NotHermitian(name.to_string()));
        }
        self.lmis.push(Lmi { name: name.to_string(), expr });
        Ok(self.lmis.len() - 1)
    }

    /// Adds `expr (cmp) rhs`; returns the index used for multiplier lookup.
    pub fn constrain(&mut self, name: &str, expr: LExpr, cmp: Cmp, rhs: f64) -> usize {
        self.lin.push(LinCon { name: name.to_string(), expr: expr + (-rhs), cmp });
        self.lin.len() - 1
    }

    pub fn maximize(&mut self, objective: LExpr) {
        self.objective = objective;
        self.sense = Sense::Maximize;
    }

    pub fn minimize(&mut self, objective: LExpr) {
        self.objective = objective;
        self.sense = Sense::Minimize;
    }

    pub fn objective_value(&self, y: &[f64]) -> f64 {
        self.objective.value(y)
    }
}

/// max bᵀz s.t. C_k − Σ z_i A_{k,i} ⪰ 0, c_l − Σ z_i a_{l,i} ≥ 0.
#[derive(Debug, Clone)]
pub(crate) struct StdForm {
    pub m: usize,
    pub b: Vec<f64>,
    pub blocks: Vec<StdBlock>,
    pub lp_c: Vec<f64>,
    pub lp_a: Vec<Vec<(usize, f64)>>,
}

#[derive(Debug, Clone)]
pub(crate) struct StdBlock {
    pub n: usize,
    pub c: CMat,
    pub terms: Vec<(usize, SpMat)>,
}

/// y = y0 + Σ_j coeffs z_j for each original variable.
#[derive(Debug, Clone)]
pub(crate) struct VarMap {
    pub y0: Vec<f64>,
    pub coeffs: Vec<Vec<(usize, f64)>>,
}

impl VarMap {
    pub fn expand(&self, z: &[f64]) -> Vec<f64> {
        self.y0
            .iter()
            .zip(&self.coeffs)
            .map(|(c, t)| c + t.iter().map(|&(j, a)| a * z[j]).sum::<f64>())
            .collect()
    }
}

pub(crate) struct Standardized {
    pub std: StdForm,
    pub map: VarMap,
    /// Objective constant after substitution (in maximize orientation).
    pub obj_const: f64,
    /// Indices of scalar constraints kept as LP rows, in order.
    pub lp_rows: Vec<usize>,
    /// True when the equality constraints are inconsistent.
    pub inconsistent: bool,
}

/// Eliminates equalities by reduced row echelon form and converts to standard form.
pub(crate) fn standardize(p: &SdpProblem) -> Standardized {
    let n = p.nvars;
    let eqs: Vec<&LinCon> = p.lin.iter().filter(|l| l.cmp == Cmp::Eq).collect();
    // rows: Σ a_i y_i = −constant
    let mut rows: Vec<(Vec<f64>, f64)> = eqs
        .iter()
        .map(|l| {
            let mut a = vec![0.0; n];
            for (i, v) in l.expr.merged() {
                a[i] += v;
            }
            (a, -l.expr.constant)
        })
        .collect();
    let mut pivots: Vec<usize> = vec![];
    let mut inconsistent = false;
    let mut r = 0;
    for col in 0..n {
        if r >= rows.len() {
            break;
        }
        let scale = rows[r..].iter().flat_map(|x| x.0.iter()).fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        let (best, bv) = (r..rows.len()).map(|k| (k, rows[k].0[col].abs())).fold((r, -1.0), |a, x| if x.1 > a.1 { x } else { a });
        if bv <= 1e-12 * scale {
            continue;
        }
        rows.swap(r, best);
        let piv = rows[r].0[col];
        for v in rows[r].0.iter_mut() {
            *v /= piv;
        }
        rows[r].1 /= piv;
        let prow = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row.0[col] != 0.0 {
                let f = row.0[col];
                for (x, &pv) in row.0.iter_mut().zip(&prow.0) {
                    *x -= f * pv;
                }
                row.1 -= f * prow.1;
            }
        }
        pivots.push(col);
        r += 1;
    }
    for row in &rows[r..] {
        let scale = 1.0 + row.1.abs();
        if row.0.iter().all(|v| v.abs() <= 1e-12) && row.1.abs() > 1e-9 * scale {
            inconsistent = true;
        }
    }
    let mut free_index = vec![usize::MAX; n];
    let mut nfree = 0;
    for (i, fi) in free_index.iter_mut().enumerate() {
        if !pivots.contains(&i) {
            *fi = nfree;
            nfree += 1;
        }
    }
    let mut y0 = vec![0.0; n];
    let mut coeffs: Vec<Vec<(usize, f64)>> = vec![vec![]; n];
    for i in 0..n {
        if free_index[i] != usize::MAX {
            coeffs[i] = vec![(free_index[i], 1.0)];
        }
    }
    for (k, &pc) in pivots.iter().enumerate() {
        y0[pc] = rows[k].1;
        coeffs[pc] = (0..n)
            .filter(|&j| j != pc && free_index[j] != usize::MAX && rows[k].0[j].abs() > 1e-15)
            .map(|j| (free_index[j], -rows[k].0[j]))
            .collect();
    }
    let map = VarMap { y0, coeffs };

    let sign = if p.sense == Sense::Maximize { 1.0 } else { -1.0 };
    let mut b = vec![0.0; nfree];
    let mut obj_const = sign * p.objective.constant;
    for (i, a) in p.objective.merged() {
        obj_const += sign * a * map.y0[i];
        for &(j, cf) in &map.coeffs[i] {
            b[j] += sign * a * cf;
        }
    }

    let mut blocks = vec![];
    for l in &p.lmis {
        let e = &l.expr;
        let mut c = e.constant.to_dense();
        let mut per: Vec<Vec<SpMat>> = vec![vec![]; nfree];
        for (i, m) in &e.terms {
            let y0 = map.y0[*i];
            if y0 != 0.0 {
                for &(a, bb, v) in &m.entries {
                    c[(a, bb)] += v * y0;
                }
            }
            for &(j, cf) in &map.coeffs[*i] {
                per[j].push(m.scale(linalg::r(-cf)));
            }
        }
        let terms = per
            .into_iter()
            .enumerate()
            .filter(|(_, ms)| !ms.is_empty())
            .map(|(j, ms)| {
                let mut acc = SpMat::zeros(e.rows, e.cols);
                for m in ms {
                    acc.entries.extend(m.entries);
                }
                (j, acc.compress())
            })
            .filter(|(_, m)| m.nnz() > 0)
            .collect();
        blocks.push(StdBlock { n: e.rows, c: linalg::hermitize(&c), terms });
    }

    let mut lp_c = vec![];
    let mut lp_a = vec![];
    let mut lp_rows = vec![];
    for (idx, l) in p.lin.iter().enumerate() {
        if l.cmp == Cmp::Eq {
            continue;
        }
        let s = if l.cmp == Cmp::Geq { 1.0 } else { -1.0 };
        let mut c = s * l.expr.constant;
        let mut a = vec![0.0; nfree];
        for (i, v) in l.expr.merged() {
            c += s * v * map.y0[i];
            for &(j, cf) in &map.coeffs[i] {
                a[j] -= s * v * cf;
            }
        }
        lp_c.push(c);
        lp_a.push(a.into_iter().enumerate().filter(|x| x.1 != 0.0).collect());
        lp_rows.push(idx);
    }
    Standardized { std: StdForm { m: nfree, b, blocks, lp_c, lp_a }, map, obj_const, lp_rows, inconsistent }
}
