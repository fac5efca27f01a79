use crate::labels::{self, SystemLabel};
use crate::linalg::{self, CMat, CVec};
use crate::{Error, Result, TOL};

#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMat,
    factors: Vec<SystemLabel>,
    normalized: bool,
}

impl DensityOperator {
    /// Validates and symmetrizes; `normalized` is set when the trace is 1 within tolerance.
    pub fn new(matrix: CMat, factors: Vec<SystemLabel>) -> Result<Self> {
        labels::validate(&factors)?;
        let d = labels::total_dim(&factors);
        linalg::check_dim(d)?;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, factors give {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        linalg::check_psd(&matrix)?;
        let matrix = linalg::hermitize(&matrix);
        let tr = matrix.trace().re;
        if tr > 1.0 + TOL {
            return Err(Error::TraceTooLarge(tr));
        }
        Ok(Self { matrix, factors, normalized: (tr - 1.0).abs() <= TOL })
    }

    /// Single-factor convenience constructor.
    pub fn single(matrix: CMat, name: &str) -> Result<Self> {
        let d = matrix.nrows();
        Self::new(matrix, vec![SystemLabel::new(name, d)?])
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: linalg::proj(psi.vector()),
            factors: psi.factors().to_vec(),
            normalized: true,
        }
    }

    pub fn maximally_mixed(label: SystemLabel) -> Self {
        let d = label.dim;
        Self { matrix: linalg::eye(d) / linalg::r(d as f64), factors: vec![label], normalized: true }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn factors(&self) -> &[SystemLabel] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        labels::dims(&self.factors)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    pub fn label_positions(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|n| labels::position(&self.factors, n)).collect()
    }

    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        let pos = self.label_positions(keep)?;
        let m = linalg::ptrace(&self.matrix, &self.dims(), &pos);
        let factors = pos.iter().map(|&p| self.factors[p].clone()).collect();
        Ok(Self { matrix: m, factors, normalized: self.normalized })
    }

    /// Reorders factors to the given label order (must name every factor).
    pub fn reorder(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.factors.len() {
            return Err(Error::DimensionMismatch("reorder must list every factor".into()));
        }
        let pos = self.label_positions(order)?;
        let m = linalg::permute_op(&self.matrix, &self.dims(), &pos);
        let factors = pos.iter().map(|&p| self.factors[p].clone()).collect();
        Ok(Self { matrix: m, factors, normalized: self.normalized })
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        labels::validate(&factors)?;
        linalg::check_dim(labels::total_dim(&factors))?;
        Ok(Self {
            matrix: linalg::kron(&self.matrix, &other.matrix),
            factors,
            normalized: self.normalized && other.normalized,
        })
    }

    /// Same matrix, new labels of identical dimensions.
    pub fn relabel(&self, factors: Vec<SystemLabel>) -> Result<Self> {
        labels::validate(&factors)?;
        if labels::dims(&factors) != self.dims() {
            return Err(Error::DimensionMismatch("relabel changes dimensions".into()));
        }
        Ok(Self { matrix: self.matrix.clone(), factors, normalized: self.normalized })
    }

    pub fn von_neumann(&self) -> f64 {
        linalg::entropy_of(&self.eigenvalues())
    }
}

/// Free-function form of [`DensityOperator::partial_trace`].
pub fn partial_trace(state: &DensityOperator, keep: &[&str]) -> Result<DensityOperator> {
    state.partial_trace(keep)
}

#[derive(Debug, Clone)]
pub struct PureState {
    vector: CVec,
    factors: Vec<SystemLabel>,
}

impl PureState {
    pub fn new(vector: CVec, factors: Vec<SystemLabel>) -> Result<Self> {
        labels::validate(&factors)?;
        let d = labels::total_dim(&factors);
        linalg::check_dim(d)?;
        if vector.len() != d {
            return Err(Error::DimensionMismatch(format!("vector length {} vs {d}", vector.len())));
        }
        let n = vector.norm();
        if (n - 1.0).abs() > 1e-7 {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { vector: &vector / linalg::r(n), factors })
    }

    pub fn vector(&self) -> &CVec {
        &self.vector
    }

    pub fn factors(&self) -> &[SystemLabel] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        labels::dims(&self.factors)
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }

    pub fn marginal(&self, keep: &[&str]) -> Result<DensityOperator> {
        let pos: Vec<usize> = keep.iter().map(|n| labels::position(&self.factors, n)).collect::<Result<_>>()?;
        let m = linalg::ptrace_pure(&self.vector, &self.dims(), &pos);
        let factors = pos.iter().map(|&p| self.factors[p].clone()).collect();
        DensityOperator::new(m, factors)
    }

    pub fn reorder(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.factors.len() {
            return Err(Error::DimensionMismatch("reorder must list every factor".into()));
        }
        let pos: Vec<usize> = order.iter().map(|n| labels::position(&self.factors, n)).collect::<Result<_>>()?;
        let v = linalg::permute_vec(&self.vector, &self.dims(), &pos);
        let factors = pos.iter().map(|&p| self.factors[p].clone()).collect();
        Ok(Self { vector: v, factors })
    }
}

#[derive(Debug, Clone)]
pub struct Isometry {
    matrix: CMat,
    in_label: SystemLabel,
    out_labels: Vec<SystemLabel>,
}

impl Isometry {
    pub fn new(matrix: CMat, in_label: SystemLabel, out_labels: Vec<SystemLabel>) -> Result<Self> {
        labels::validate(&out_labels)?;
        let dout = labels::total_dim(&out_labels);
        if matrix.nrows() != dout || matrix.ncols() != in_label.dim {
            return Err(Error::DimensionMismatch(format!(
                "isometry matrix {}x{} vs {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                dout,
                in_label.dim
            )));
        }
        let defect = isometry_defect(&matrix);
        if defect > 1e-7 {
            return Err(Error::NotIsometry(defect));
        }
        Ok(Self { matrix, in_label, out_labels })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn in_label(&self) -> &SystemLabel {
        &self.in_label
    }

    pub fn out_labels(&self) -> &[SystemLabel] {
        &self.out_labels
    }

    pub fn out_dims(&self) -> Vec<usize> {
        labels::dims(&self.out_labels)
    }
}

/// max-entry deviation of V†V from the identity.
pub fn isometry_defect(v: &CMat) -> f64 {
    let g = v.adjoint() * v;
    linalg::max_abs(&(g - linalg::eye(v.ncols())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, max_entangled, r};

    #[test]
    fn marginal_of_bell_is_mixed() {
        let phi = PureState::new(max_entangled(2), vec![SystemLabel::of("A", 2), SystemLabel::of("B", 2)]).unwrap();
        let a = phi.density().partial_trace(&["A"]).unwrap();
        assert!(max_abs(&(a.matrix() - linalg::eye(2) * r(0.5))) < 1e-15);
        assert!(a.is_normalized());
    }

    #[test]
    fn product_marginal() {
        let a = DensityOperator::single(CMat::from_diagonal(&CVec::from_vec(vec![r(0.8), r(0.2)])), "A").unwrap();
        let b = DensityOperator::maximally_mixed(SystemLabel::of("B", 3));
        let ab = a.tensor(&b).unwrap();
        let back = ab.partial_trace(&["A"]).unwrap();
        assert!(max_abs(&(back.matrix() - a.matrix())) < 1e-15);
        let ba = ab.reorder(&["B", "A"]).unwrap();
        assert!(max_abs(&(ba.partial_trace(&["B"]).unwrap().matrix() - b.matrix())) < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        let neg = CMat::from_diagonal(&CVec::from_vec(vec![r(1.1), r(-0.1)]));
        assert!(matches!(DensityOperator::single(neg, "A"), Err(Error::NotPsd(_))));
        let big = linalg::eye(2);
        assert!(matches!(DensityOperator::single(big, "A"), Err(Error::TraceTooLarge(_))));
        let a = DensityOperator::maximally_mixed(SystemLabel::of("A", 2));
        assert!(matches!(a.partial_trace(&["Z"]), Err(Error::UnknownLabel(_))));
        assert!(matches!(a.tensor(&a), Err(Error::DuplicateLabel(_))));
        assert!(SystemLabel::new("X", 0).is_err());
    }

    #[test]
    fn subnormalized_flag() {
        let m = linalg::eye(2) * r(0.25);
        let s = DensityOperator::single(m, "A").unwrap();
        assert!(!s.is_normalized());
        assert!((s.trace() - 0.5).abs() < 1e-15);
    }
}
