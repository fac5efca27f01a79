use psc_matqi::linalg::{self, c, r, CMat};

use crate::{Channel, Error, Result};

/// The example channels. The erasure flag |*⟩ is the last output basis vector.
#[derive(Debug, Clone)]
pub enum Zoo {
    Identity { d: usize },
    Erasure { d: usize, q: f64 },
    /// Z_p(ρ) = (1−p)ρ + p ZρZ on a qubit.
    Dephasing { p: f64 },
    /// (1−p)ρ + p Tr(ρ) 1/d.
    Depolarizing { d: usize, p: f64 },
    /// ρ ↦ ρ ∘ S (entrywise), S PSD with unit diagonal.
    Schur { s: CMat },
    /// ρ ↦ Tr(ρ) σ.
    Constant { din: usize, sigma: CMat },
}

fn prob(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) || v.is_nan() {
        return Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

fn dim(name: &str, d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be ≥ 1")));
    }
    Ok(())
}

fn nonzero(ks: Vec<CMat>) -> Vec<CMat> {
    let (rows, cols) = ks[0].shape();
    let kept: Vec<CMat> = ks.into_iter().filter(|k| linalg::max_abs(k) > 0.0).collect();
    if kept.is_empty() {
        vec![linalg::zeros(rows, cols)]
    } else {
        kept
    }
}

/// Gram vectors of S: column i of the result is φ_i with ⟨φ_j|φ_i⟩ = S_ij.
pub fn schur_vectors(s: &CMat) -> Result<CMat> {
    let d = s.nrows();
    if s.ncols() != d {
        return Err(Error::InvalidParameter("Schur matrix must be square".into()));
    }
    for i in 0..d {
        if (s[(i, i)] - r(1.0)).norm() > 1e-9 {
            return Err(Error::InvalidParameter(format!("Schur matrix diagonal entry {i} is {}", s[(i, i)])));
        }
    }
    linalg::check_psd(s).map_err(|e| Error::InvalidParameter(format!("Schur matrix: {e}")))?;
    let (vals, vecs) = linalg::support(s);
    Ok(CMat::from_fn(vals.len(), d, |k, i| vecs[(i, k)] * r(vals[k].sqrt())))
}

pub fn make_channel(kind: &Zoo) -> Result<Channel> {
    let ks = match kind {
        Zoo::Identity { d } => {
            dim("d", *d)?;
            vec![linalg::eye(*d)]
        }
        Zoo::Erasure { d, q } => {
            dim("d", *d)?;
            prob("q", *q)?;
            let mut ks = vec![CMat::from_fn(d + 1, *d, |i, j| if i == j { r((1.0 - q).sqrt()) } else { r(0.0) })];
            for j in 0..*d {
                let mut k = linalg::zeros(d + 1, *d);
                k[(*d, j)] = r(q.sqrt());
                ks.push(k);
            }
            nonzero(ks)
        }
        Zoo::Dephasing { p } => {
            prob("p", *p)?;
            nonzero(vec![linalg::eye(2) * r((1.0 - p).sqrt()), linalg::pauli_z() * r(p.sqrt())])
        }
        Zoo::Depolarizing { d, p } => {
            dim("d", *d)?;
            prob("p", *p)?;
            let dd = *d as f64;
            let mut ks = vec![];
            for a in 0..*d {
                for b in 0..*d {
                    let w = weyl(*d, a, b);
                    let wt = if a == 0 && b == 0 { 1.0 - p + p / (dd * dd) } else { p / (dd * dd) };
                    ks.push(w * r(wt.sqrt()));
                }
            }
            nonzero(ks)
        }
        Zoo::Schur { s } => {
            let phi = schur_vectors(s)?;
            let d = s.nrows();
            (0..phi.nrows()).map(|e| CMat::from_fn(d, d, |i, j| if i == j { phi[(e, i)] } else { r(0.0) })).collect()
        }
        Zoo::Constant { din, sigma } => {
            dim("din", *din)?;
            linalg::check_psd(sigma).map_err(|e| Error::InvalidParameter(format!("σ: {e}")))?;
            let t = sigma.trace().re;
            if (t - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!("σ has trace {t}")));
            }
            let (vals, vecs) = linalg::support(sigma);
            let mut ks = vec![];
            for (k, &l) in vals.iter().enumerate() {
                for j in 0..*din {
                    let mut m = linalg::zeros(sigma.nrows(), *din);
                    for i in 0..sigma.nrows() {
                        m[(i, j)] = vecs[(i, k)] * r(l.sqrt());
                    }
                    ks.push(m);
                }
            }
            ks
        }
    };
    Channel::new(ks)
}

/// Weyl operator X^a Z^b with X|j⟩ = |j+1⟩ and Z|j⟩ = ω^j |j⟩.
fn weyl(d: usize, a: usize, b: usize) -> CMat {
    let w = 2.0 * std::f64::consts::PI / d as f64;
    let mut m = linalg::zeros(d, d);
    for j in 0..d {
        let ph = w * (b * j) as f64;
        m[((j + a) % d, j)] = c(ph.cos(), ph.sin());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depolarizing_action() {
        let ch = make_channel(&Zoo::Depolarizing { d: 3, p: 0.4 }).unwrap();
        let rho = CMat::from_fn(3, 3, |i, j| if i == j { r([0.5, 0.3, 0.2][i]) } else { c(0.05, 0.01 * (i as f64 - j as f64)) });
        let expect = &rho * r(0.6) + linalg::eye(3) * r(0.4 / 3.0);
        assert!(linalg::max_abs(&(ch.apply_raw(&rho) - expect)) < 1e-12);
    }

    #[test]
    fn schur_action_and_validation() {
        let s = CMat::from_row_slice(2, 2, &[r(1.0), c(0.3, 0.4), c(0.3, -0.4), r(1.0)]);
        let ch = make_channel(&Zoo::Schur { s: s.clone() }).unwrap();
        let rho = CMat::from_row_slice(2, 2, &[r(0.5), c(0.2, 0.1), c(0.2, -0.1), r(0.5)]);
        let expect = rho.component_mul(&s);
        assert!(linalg::max_abs(&(ch.apply_raw(&rho) - expect)) < 1e-12);
        let bad = CMat::from_row_slice(2, 2, &[r(1.0), r(0.0), r(0.0), r(0.9)]);
        assert!(make_channel(&Zoo::Schur { s: bad }).is_err());
    }

    #[test]
    fn parameter_ranges() {
        assert!(make_channel(&Zoo::Erasure { d: 2, q: 1.2 }).is_err());
        assert!(make_channel(&Zoo::Dephasing { p: -0.1 }).is_err());
        assert!(make_channel(&Zoo::Identity { d: 0 }).is_err());
    }
}

/// Random channel din → dout with `nkraus` Kraus operators cut from a Haar isometry.
pub fn random_channel(din: usize, dout: usize, nkraus: usize, rng: &mut impl rand::Rng) -> Result<Channel> {
    if dout * nkraus < din {
        return Err(Error::InvalidParameter(format!("no isometry {din} -> {dout}x{nkraus}")));
    }
    let u = psc_matqi::haar_unitary(dout * nkraus, rng);
    let v = u.columns(0, din);
    let ks = (0..nkraus).map(|e| CMat::from_fn(dout, din, |b, i| v[(b * nkraus + e, i)])).collect();
    Channel::new(ks)
}
