use psc_matqi::linalg;

use crate::problem::{Cmp, SdpProblem};
use crate::{Error, Result};

#[derive(Debug, Clone, serde::Serialize)]
pub struct Residuals {
    pub objective: f64,
    /// Smallest eigenvalue of each LMI at the candidate.
    pub lmi_min_eig: Vec<f64>,
    /// max(0, −λ_min) per LMI.
    pub lmi_violation: Vec<f64>,
    /// Violation of each scalar constraint (absolute).
    pub lin_violation: Vec<f64>,
    pub max_violation: f64,
}

impl Residuals {
    pub fn feasible(&self, tol: f64) -> bool {
        self.max_violation <= tol
    }
}

/// Evaluates every constraint and the objective at the candidate variables.
pub fn verify(problem: &SdpProblem, y: &[f64]) -> Result<Residuals> {
    if y.len() != problem.nvars {
        return Err(Error::Shape(format!("candidate has {} entries, problem has {} variables", y.len(), problem.nvars)));
    }
    let lmi_min_eig: Vec<f64> = problem
        .lmis
        .iter()
        .map(|l| linalg::eigvalsh(&l.expr.value(y)).first().copied().unwrap_or(0.0))
        .collect();
    let lmi_violation: Vec<f64> = lmi_min_eig.iter().map(|&v| (-v).max(0.0)).collect();
    let lin_violation: Vec<f64> = problem
        .lin
        .iter()
        .map(|l| {
            let e = l.expr.value(y);
            match l.cmp {
                Cmp::Geq => (-e).max(0.0),
                Cmp::Leq => e.max(0.0),
                Cmp::Eq => e.abs(),
            }
        })
        .collect();
    let max_violation = lmi_violation.iter().chain(&lin_violation).fold(0.0f64, |a, &b| a.max(b));
    Ok(Residuals { objective: problem.objective_value(y), lmi_min_eig, lmi_violation, lin_violation, max_violation })
}
