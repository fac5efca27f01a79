use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c, r, CMat, CVec};
use crate::{Error, Result};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> crate::C64 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    c(a, b)
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn haar_state(dim: usize, rng: &mut impl Rng) -> CVec {
    let v = CVec::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v / r(n)
}

/// Haar unitary via QR of a Ginibre matrix with the phase correction on R's diagonal.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> CMat {
    let g = ginibre(dim, dim, rng);
    let qr = g.qr();
    let (mut q, rr) = (qr.q(), qr.r());
    for k in 0..dim {
        let d = rr[(k, k)];
        let ph = if d.norm() > 0.0 { d / r(d.norm()) } else { r(1.0) };
        q.column_mut(k).scale_mut_c(ph);
    }
    q
}

pub fn haar_projector(dim: usize, rank: usize, rng: &mut impl Rng) -> Result<CMat> {
    if rank > dim {
        return Err(Error::RankTooLarge { rank, dim });
    }
    let u = haar_unitary(dim, rng);
    let v = u.columns(0, rank);
    Ok(&v * v.adjoint())
}

/// Random density operator of the given rank (induced measure: partial trace of a Haar state).
pub fn random_density(dim: usize, rank: usize, rng: &mut impl Rng) -> CMat {
    let g = ginibre(dim, rank.max(1), rng);
    let m = &g * g.adjoint();
    let t = m.trace().re;
    m / r(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaarKind {
    State,
    Unitary,
    Projector { rank: usize },
}

#[derive(Debug, Clone)]
pub enum HaarSample {
    State(CVec),
    Unitary(CMat),
    Projector(CMat),
}

pub fn haar_sample(kind: HaarKind, dim: usize, seed: u64) -> Result<HaarSample> {
    linalg::check_dim(dim)?;
    let mut rng = rng_from_seed(seed);
    Ok(match kind {
        HaarKind::State => HaarSample::State(haar_state(dim, &mut rng)),
        HaarKind::Unitary => HaarSample::Unitary(haar_unitary(dim, &mut rng)),
        HaarKind::Projector { rank } => HaarSample::Projector(haar_projector(dim, rank, &mut rng)?),
    })
}

trait ScaleC {
    fn scale_mut_c(&mut self, a: crate::C64);
}

impl<S> ScaleC for nalgebra::Matrix<crate::C64, nalgebra::Dyn, nalgebra::U1, S>
where
    S: nalgebra::StorageMut<crate::C64, nalgebra::Dyn, nalgebra::U1>,
{
    fn scale_mut_c(&mut self, a: crate::C64) {
        for x in self.iter_mut() {
            *x *= a;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, proj};

    #[test]
    fn projector_sample() {
        let HaarSample::Projector(p) = haar_sample(HaarKind::Projector { rank: 2 }, 4, 7).unwrap() else {
            panic!()
        };
        assert!(max_abs(&(&p * &p - &p)) < 1e-12);
        assert!((p.trace().re - 2.0).abs() < 1e-12);
        assert!(haar_sample(HaarKind::Projector { rank: 5 }, 4, 7).is_err());
    }

    #[test]
    fn deterministic_state() {
        let HaarSample::State(a) = haar_sample(HaarKind::State, 2, 1).unwrap() else { panic!() };
        let HaarSample::State(b) = haar_sample(HaarKind::State, 2, 1).unwrap() else { panic!() };
        assert!((a.norm() - 1.0).abs() < 1e-14);
        assert_eq!(a, b);
    }

    #[test]
    fn unitary_is_unitary() {
        let HaarSample::Unitary(u) = haar_sample(HaarKind::Unitary, 5, 3).unwrap() else { panic!() };
        assert!(max_abs(&(u.adjoint() * &u - linalg::eye(5))) < 1e-12);
    }

    #[test]
    fn first_moment_of_qubit_states() {
        let mut rng = rng_from_seed(11);
        let mut avg = linalg::zeros(2, 2);
        let n = 10_000;
        for _ in 0..n {
            avg += proj(&haar_state(2, &mut rng));
        }
        avg /= r(n as f64);
        let td = 0.5 * linalg::trace_norm_herm(&(avg - linalg::eye(2) * r(0.5)));
        assert!(td < 0.02, "{td}");
    }
}
