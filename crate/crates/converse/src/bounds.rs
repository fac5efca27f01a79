use psc_degradable::TypeIDilation;
use psc_entropies::aep::aep_constants;
use psc_matqi::linalg::{self, CMat};
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    Weak,
    Thm1,
    Thm2,
    Thm3,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConverseBoundReport {
    pub bound_kind: BoundKind,
    pub n: u64,
    pub eps: f64,
    pub delta: f64,
    /// λ (Thm 1, Thm 3) or η (Thm 2); 0 for the weak bound.
    pub lambda: f64,
    pub q1: f64,
    pub dim_a: usize,
    pub mu: f64,
    pub terms: Vec<Term>,
    /// Upper bound on log N_E (or log M for Thm 2).
    pub total: f64,
}

impl ConverseBoundReport {
    fn new(kind: BoundKind, n: u64, eps: f64, delta: f64, lambda: f64, q1: f64, dim_a: usize, mu: f64, terms: Vec<(&str, f64)>) -> Self {
        let total = terms.iter().map(|t| t.1).sum();
        Self {
            bound_kind: kind,
            n,
            eps,
            delta,
            lambda,
            q1,
            dim_a,
            mu,
            terms: terms.into_iter().map(|(name, value)| Term { name: name.into(), value }).collect(),
            total,
        }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }

    /// total / n
    pub fn rate(&self) -> f64 {
        self.total / self.n as f64
    }
}

fn check_common(q1: f64, n: u64, mu: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("n must be ≥ 1".into()));
    }
    if !q1.is_finite() {
        return Err(Error::Precondition("q1 must be finite".into()));
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::Precondition(format!("μ must be a finite nonnegative number, got {mu}")));
    }
    Ok(())
}

/// (n·q1 + 1)/(1 − 2ε).
pub fn weak_bound(q1: f64, n: u64, eps: f64) -> Result<ConverseBoundReport> {
    check_common(q1, n, 0.0)?;
    if !(0.0..0.5).contains(&eps) {
        return Err(Error::Precondition(format!("weak converse needs 0 ≤ ε < 1/2, got {eps}")));
    }
    let f = 1.0 / (1.0 - 2.0 * eps);
    let nq = n as f64 * q1;
    Ok(ConverseBoundReport::new(BoundKind::Weak, n, eps, 0.0, 0.0, q1, 0, 0.0, vec![("n_q1", f * nq), ("one", f)]))
}

/// μ·√(n ln(64 n^{|A|²}/λ²)), with the logarithm expanded to avoid overflow.
fn aep_term(mu: f64, n: u64, dim_a: usize, lambda: f64) -> f64 {
    let nf = n as f64;
    let ln_arg = 64f64.ln() + (dim_a * dim_a) as f64 * nf.ln() - 2.0 * lambda.ln();
    mu * (nf * ln_arg).sqrt()
}

pub fn thm1_bound(q1: f64, dim_a: usize, n: u64, eps: f64, mu: f64) -> Result<ConverseBoundReport> {
    check_common(q1, n, mu)?;
    if !(eps > 0.0 && eps < std::f64::consts::FRAC_1_SQRT_2) {
        return Err(Error::Precondition(format!("Theorem 1 needs 0 < ε < 1/√2, got {eps}")));
    }
    let lambda = 0.25 * (std::f64::consts::FRAC_1_SQRT_2 - eps);
    let nf = n as f64;
    Ok(ConverseBoundReport::new(
        BoundKind::Thm1,
        n,
        eps,
        0.0,
        lambda,
        q1,
        dim_a,
        mu,
        vec![
            ("n_q1", nf * q1),
            ("aep", aep_term(mu, n, dim_a, lambda)),
            ("log_n", 3.0 * (dim_a * dim_a) as f64 * nf.log2()),
            ("constant", 5.0),
            ("log_inv_lambda", 5.0 * (1.0 / lambda).log2()),
        ],
    ))
}

pub fn thm2_bound(q1: f64, dim_a: usize, n: u64, eps: f64, delta: f64, mu: f64) -> Result<ConverseBoundReport> {
    check_common(q1, n, mu)?;
    if eps < 0.0 || delta < 0.0 {
        return Err(Error::Precondition("ε and δ must be nonnegative".into()));
    }
    let eta = (std::f64::consts::FRAC_1_SQRT_2 - eps - 2.0 * delta) / 6.0;
    if eta <= 1e-12 {
        return Err(Error::Precondition(format!("Theorem 2 needs ε + 2δ < 1/√2, got ε = {eps}, δ = {delta}")));
    }
    let nf = n as f64;
    Ok(ConverseBoundReport::new(
        BoundKind::Thm2,
        n,
        eps,
        delta,
        eta,
        q1,
        dim_a,
        mu,
        vec![
            ("n_q1", nf * q1),
            ("aep", aep_term(mu, n, dim_a, eta)),
            ("log_n", 3.0 * (dim_a * dim_a) as f64 * nf.log2()),
            ("constant", 9.0),
            ("log_inv_eta", 11.0 * (1.0 / eta).log2()),
        ],
    ))
}

/// Constant in the instantiated O(log n) term of Theorem 3.
pub const THM3_C0: f64 = 6.0;

pub fn thm3_bound(q1: f64, dim_a: usize, n: u64, eps: f64, mu: f64, log_ne_symmetric: f64) -> Result<ConverseBoundReport> {
    thm3_bound_with(q1, dim_a, n, eps, mu, log_ne_symmetric, THM3_C0)
}

pub fn thm3_bound_with(q1: f64, dim_a: usize, n: u64, eps: f64, mu: f64, log_ne_symmetric: f64, c0: f64) -> Result<ConverseBoundReport> {
    check_common(q1, n, mu)?;
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Precondition(format!("Theorem 3 needs 0 ≤ ε < 1, got {eps}")));
    }
    if !(log_ne_symmetric >= 0.0 && log_ne_symmetric.is_finite()) {
        return Err(Error::Precondition("log N_E of the symmetric channel must be finite and ≥ 0".into()));
    }
    let lambda = (1.0 - eps) / 5.0;
    let nf = n as f64;
    Ok(ConverseBoundReport::new(
        BoundKind::Thm3,
        n,
        eps,
        0.0,
        lambda,
        q1,
        dim_a,
        mu,
        vec![
            ("n_q1", nf * q1),
            ("aep", aep_term(mu, n, dim_a, lambda)),
            ("log_inv_lambda", 8.0 * (1.0 / lambda).log2()),
            ("log_n_instantiated", 3.0 * (dim_a * dim_a) as f64 * nf.log2() + c0),
            ("log_ne_symmetric", log_ne_symmetric),
        ],
    ))
}

/// How μ is chosen for the AEP term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MuConvention {
    /// μ_B + μ_C of ψ^{FE′} at the given input state, capped.
    Optimizer,
    /// The cap itself, valid for every input state.
    WorstCase,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuReport {
    pub mu_b: f64,
    pub mu_c: f64,
    pub cap: f64,
    pub mu: f64,
}

/// μ for H_max(F|E′) of ψ = (1⊗VU)φ with φ purifying ρ, capped at 2·log(dF·dE).
pub fn mu_for_input(dil: &TypeIDilation, rho: &CMat, conv: MuConvention) -> Result<MuReport> {
    let (df, de) = (dil.dim_f, dil.dim_env);
    let cap = 2.0 * ((df * de) as f64).log2();
    let (mu_b, mu_c) = match conv {
        MuConvention::Fixed(m) => {
            if !(m >= 0.0 && m.is_finite()) {
                return Err(Error::Precondition(format!("μ must be finite and ≥ 0, got {m}")));
            }
            return Ok(MuReport { mu_b: f64::NAN, mu_c: f64::NAN, cap, mu: m });
        }
        MuConvention::WorstCase => return Ok(MuReport { mu_b: f64::NAN, mu_c: f64::NAN, cap, mu: cap }),
        MuConvention::Optimizer => {
            let vu = dil.vu();
            // ρ^{FE′} = Tr_E VUρ(VU)†
            let out = &vu * rho * vu.adjoint();
            let fe = linalg::ptrace(&out, &[df, de, de], &[0, 2]);
            let (b, c, _) = aep_constants(&fe, df, de)?;
            (b, c)
        }
    };
    Ok(MuReport { mu_b, mu_c, cap, mu: (mu_b + mu_c).min(cap) })
}
