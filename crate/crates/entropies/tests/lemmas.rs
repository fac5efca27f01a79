use psc_channels::zoo::random_channel;
use psc_entropies::lemmas::{self, erasure_extremal_state};
use psc_entropies::minmax::hmin_smooth_raw;
use psc_matqi::haar::{haar_unitary, random_density, rng_from_seed};
use psc_matqi::linalg::{self, CMat};
use rand::Rng;

const SLACK: f64 = 1e-5;

fn tri_dims(k: usize) -> [usize; 3] {
    [[2, 2, 2], [3, 2, 2], [2, 3, 2]][k % 3]
}

fn state(dims: [usize; 3], rng: &mut impl Rng) -> CMat {
    random_density(dims.iter().product(), 2, rng)
}

#[test]
fn monotonicity() {
    let mut rng = rng_from_seed(100);
    for k in 0..8 {
        let dims = tri_dims(k);
        let rho = state(dims, &mut rng);
        let eps = rng.random_range(0.0..0.5);
        for c in lemmas::monotonicity_partial_trace(&rho, dims, eps).unwrap() {
            assert!(c.holds(SLACK), "{c:?}");
        }
        let rab = linalg::ptrace(&rho, &dims, &[0, 1]);
        let t = random_channel(dims[1], 2, 2, &mut rng).unwrap();
        for c in lemmas::monotonicity_channel(&rab, dims[0], dims[1], &t, eps).unwrap() {
            assert!(c.holds(SLACK), "{c:?}");
        }
    }
}

#[test]
fn chain_rules() {
    let mut rng = rng_from_seed(101);
    for k in 0..6 {
        let dims = tri_dims(k);
        let rho = state(dims, &mut rng);
        let eps = rng.random_range(0.0..0.2);
        let delta = rng.random_range(0.0..0.15);
        let eta = rng.random_range(0.05..0.2);
        let c = lemmas::chain_max_le_max_max(&rho, dims, eps, delta, eta).unwrap();
        assert!(c.holds(SLACK), "{c:?}");
        let c = lemmas::chain_max_ge_min_max(&rho, dims, eps, delta, eta).unwrap();
        assert!(c.holds(SLACK), "{c:?}");
    }
}

#[test]
fn min_max_and_max_min() {
    let mut rng = rng_from_seed(102);
    for k in 0..8 {
        let d = [2, 3][k % 2];
        let rho = random_density(d * 2, 2 + k % 3, &mut rng);
        let a = rng.random_range(0.0..0.7);
        let b = rng.random_range(0.0..0.7);
        let c = lemmas::min_max_inequality(&rho, d, 2, a, b).unwrap();
        assert!(c.holds(SLACK), "{c:?}");
        let c = lemmas::min_max_inequality_simple(&rho, d, 2, a.sin() * 0.9, b.sin() * 0.5).unwrap();
        assert!(c.holds(SLACK), "{c:?}");
        let c = lemmas::max_min_inequality(&rho, d, 2, rng.random_range(0.1..0.9)).unwrap();
        assert!(c.holds(SLACK), "{c:?}");
    }
}

#[test]
fn boundary_parameters_rejected() {
    let rho = random_density(4, 2, &mut rng_from_seed(1));
    assert!(lemmas::min_max_inequality(&rho, 2, 2, 0.8, std::f64::consts::FRAC_PI_2 - 0.8).is_err());
    assert!(lemmas::min_max_inequality_simple(&rho, 2, 2, 0.4, 0.6).is_err());
    assert!(lemmas::max_min_inequality(&rho, 2, 2, 0.0).is_err());
    assert!(lemmas::max_min_inequality(&rho, 2, 2, 1.0).is_err());
    assert!(lemmas::chain_max_le_max_max(&random_density(8, 2, &mut rng_from_seed(2)), [2, 2, 2], 0.5, 0.2, 0.1).is_err());
    assert!(lemmas::chain_max_le_max_max(&random_density(8, 2, &mut rng_from_seed(2)), [2, 2, 2], 0.1, 0.1, 0.0).is_err());
}

#[test]
fn duality_under_purifier_isometries() {
    let mut rng = rng_from_seed(103);
    for k in 0..6 {
        let rho = random_density(4, 2, &mut rng);
        let u = haar_unitary(3, &mut rng);
        let w = u.columns(0, 2).into_owned();
        let c = lemmas::duality(&rho, 2, 2, &w, [0.0, 0.2, 0.5][k % 3]).unwrap();
        assert!((c.lhs - c.rhs).abs() <= SLACK, "{c:?}");
    }
}

#[test]
fn concavity_and_max_plus_log() {
    let mut rng = rng_from_seed(104);
    for _ in 0..5 {
        let rho = random_density(4, 2, &mut rng);
        let ens: Vec<(f64, CMat, CMat)> = (0..2).map(|_| (0.5, haar_unitary(2, &mut rng), haar_unitary(2, &mut rng))).collect();
        let eps = rng.random_range(0.0..0.6);
        let c = lemmas::concavity(&rho, 2, 2, &ens, eps).unwrap();
        assert!(c.holds(SLACK), "{c:?}");
        let p = rng.random_range(0.2..0.8);
        let states = vec![(p, random_density(4, 1, &mut rng)), (1.0 - p, random_density(4, 2, &mut rng))];
        let c = lemmas::max_plus_log(&states, 2, 2, eps).unwrap();
        assert!(c.holds(SLACK), "{c:?}");
    }
}

#[test]
fn smoothing_jump_on_extremal_state() {
    let mut gaps = vec![];
    for d in [2usize, 4] {
        let v = erasure_extremal_state(d);
        assert!((v.norm() - 1.0).abs() < 1e-12);
        let r = linalg::ptrace_pure(&v, &[d, d + 1, d + 1], &[0, 1]);
        let lo = hmin_smooth_raw(&r, d, d + 1, 0.5).unwrap().value;
        let hi = hmin_smooth_raw(&r, d, d + 1, 0.75).unwrap().value;
        assert!(hi - lo >= 0.5, "d={d}: {hi} − {lo}");
        gaps.push(hi - lo);
    }
    assert!(gaps[1] > gaps[0]);
}
