use psc_entropies::aep::{aep_constants, hmin_smooth_iid, permutations, TypicalProjector};
use psc_entropies::minmax::{hmax_smooth_raw, hmin_smooth_raw};
use psc_entropies::{aep_bound, hmax_smooth_iid, typical_projector, AepParams, AepSide, Sign};
use psc_matqi::haar::{random_density, rng_from_seed};
use psc_matqi::linalg::{self, kron, r, CMat, CVec};

fn regrouped_square(rho: &CMat, da: usize, db: usize) -> CMat {
    linalg::permute_op(&kron(rho, rho), &[da, db, da, db], &[0, 2, 1, 3])
}

#[test]
fn aep_bound_examples() {
    let p = AepParams { mu_b: 1.0, mu_c: 1.0, n: 100, eps: 0.5 };
    let up = aep_bound(&p, 0.5, AepSide::MaxUpper).unwrap();
    assert!((up - (50.0 + 2.0 * (100.0 * 4f64.ln()).sqrt())).abs() < 1e-12);
    assert!((up - 73.548).abs() < 1e-3);
    let lo = aep_bound(&p, 0.5, AepSide::MinLower).unwrap();
    assert!((lo - (2.0 * 50.0 - up)).abs() < 1e-12);
    let p1 = AepParams { mu_b: 1.0, mu_c: 1.0, n: 1, eps: 0.99 };
    let up = aep_bound(&p1, 0.5, AepSide::MaxUpper).unwrap();
    assert!((up - 0.5 - 2.0 * (2.0f64 / 0.99).ln().sqrt()).abs() < 1e-12);
    for eps in [0.0, 1.0, -0.1] {
        assert!(aep_bound(&AepParams { eps, ..p }, 0.5, AepSide::MaxUpper).is_err());
    }
}

#[test]
fn permutations_enumerated() {
    assert_eq!(permutations(3).len(), 6);
    assert_eq!(permutations(1), vec![vec![0]]);
}

#[test]
fn typical_projector_examples() {
    let pure = linalg::proj(&linalg::ket(2, 1));
    let t = typical_projector(&pure, 3, 0.5, Sign::Plus).unwrap();
    assert!((t.weight - 1.0).abs() < 1e-12);
    assert!(linalg::max_abs(&(t.projector - kron(&kron(&pure, &pure), &pure))) < 1e-12);

    let rho = CMat::from_diagonal(&CVec::from_vec(vec![r(0.9), r(0.1)]));
    let t: TypicalProjector = typical_projector(&rho, 4, 1.0, Sign::Plus).unwrap();
    assert!((t.mu - 10f64.log2()).abs() < 1e-12);
    // exact enumeration of the 16 strings
    let s = -0.9 * 0.9f64.log2() - 0.1 * 0.1f64.log2();
    let mut w = 0.0;
    for x in 0..16u32 {
        let ones = x.count_ones() as i32;
        let info = -(ones as f64) * 0.1f64.log2() - (4 - ones) as f64 * 0.9f64.log2();
        if info <= 4.0 * s + 2.0 {
            w += 0.1f64.powi(ones) * 0.9f64.powi(4 - ones);
        }
    }
    assert!((t.weight - w).abs() < 1e-12);
    assert!(t.weight >= t.hoeffding);
    let p2 = &t.projector * &t.projector;
    assert!(linalg::max_abs(&(p2 - &t.projector)) < 1e-12);

    let t = typical_projector(&rho, 4, 1e6, Sign::Plus).unwrap();
    assert!((t.weight - 1.0).abs() < 1e-12);
    assert!((linalg::trace(&t.projector).re - 16.0).abs() < 1e-9);

    let mut rng = rng_from_seed(5);
    for n in 1..=5 {
        let rho = random_density(3, 3, &mut rng);
        for delta in [0.3, 1.0, 2.0] {
            for sign in [Sign::Plus, Sign::Minus] {
                let t = typical_projector(&rho, n, delta, sign).unwrap();
                assert!(t.weight >= t.hoeffding - 1e-12, "{n} {delta} {sign:?}");
            }
        }
    }
}

#[test]
fn iid_reduction_matches_generic_solver() {
    let mut rng = rng_from_seed(6);
    let rho = random_density(4, 2, &mut rng);
    for eps in [0.1, 0.4] {
        let a = hmin_smooth_iid(&rho, 2, 2, 1, eps).unwrap().value;
        let b = hmin_smooth_raw(&rho, 2, 2, eps).unwrap().value;
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        let a = hmin_smooth_iid(&rho, 2, 2, 2, eps).unwrap().value;
        let b = hmin_smooth_raw(&regrouped_square(&rho, 2, 2), 4, 4, eps).unwrap().value;
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        let a = hmax_smooth_iid(&rho, 2, 2, 2, eps).unwrap().value;
        let b = hmax_smooth_raw(&regrouped_square(&rho, 2, 2), 4, 4, eps).unwrap().value;
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn aep_upper_bound_small_n() {
    let mut rng = rng_from_seed(7);
    let rho = random_density(4, 2, &mut rng);
    let (mb, mc, s) = aep_constants(&rho, 2, 2).unwrap();
    for n in 1..=2 {
        let h = hmax_smooth_iid(&rho, 2, 2, n, 0.1).unwrap();
        let b = aep_bound(&AepParams { mu_b: mb, mu_c: mc, n, eps: 0.1 }, s, AepSide::MaxUpper).unwrap();
        assert!(h.value <= b + 1e-6, "n={n}: {} > {b}", h.value);
        assert!(h.gap <= 1e-6);
    }
}
