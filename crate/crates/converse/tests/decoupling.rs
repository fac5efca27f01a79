use psc_converse::*;
use psc_matqi::linalg::{self, r, CVec};
use psc_matqi::{haar_state, rng_from_seed};

#[test]
fn trivial_environment_full_rank_code() {
    // ψ maximally entangled on A⊗B, E trivial; d = |A| forces Q = 1
    let psi = linalg::max_entangled(3);
    let t = decoupling_trial(&psi, [3, 3, 1], 3, 0.0, 0.5, 7).unwrap();
    assert!((t.t_q - 1.0).abs() < 1e-12);
    assert!(t.distance < 1e-4, "{t:?}");
    assert!(t.distance <= t.bound);
    assert!((0.0..=1.0).contains(&t.distance));
}

#[test]
fn product_state_satisfies_bound() {
    // ψ = Φ^{AB} ⊗ |0⟩^E: H_min(A|E) = H_min(A) = log |A|
    let psi = linalg::kron_vec(&linalg::max_entangled(4), &linalg::ket(2, 0));
    let setup = DecouplingSetup::new(&psi, [4, 4, 2], 0.0, 0.9).unwrap();
    assert!((setup.hmin_eta - 2.0).abs() < 1e-6);
    for d in [1, 2] {
        let t = setup.trial(d, 3).unwrap();
        assert!(t.distance + 0.1 < t.bound, "{t:?}");
    }
    assert_eq!(prop4_rank(2.0, 0.9), 2);
    assert_eq!(prop4_rank(2.0, 0.1), 1);
}

#[test]
fn random_state_best_sample_within_bound() {
    let mut rng = rng_from_seed(11);
    let psi = haar_state(4 * 2 * 2, &mut rng);
    let setup = DecouplingSetup::new(&psi, [4, 2, 2], 0.05, 0.3).unwrap();
    let trials: Vec<DecouplingTrialResult> = (0..200).map(|s| setup.trial(2, s).unwrap()).collect();
    let best = trials.iter().map(|t| t.distance).fold(f64::INFINITY, f64::min);
    assert!(best <= setup.bound(2), "{best} > {}", setup.bound(2));
    assert!(trials.iter().all(|t| (0.0..=1.0).contains(&t.distance) && t.t_q > 0.0));
    // t_Q averages to 1 over the Haar measure
    let mean_t: f64 = trials.iter().map(|t| t.t_q).sum::<f64>() / trials.len() as f64;
    assert!((mean_t - 1.0).abs() < 0.1, "{mean_t}");
}

#[test]
fn trials_are_seeded() {
    let mut rng = rng_from_seed(5);
    let psi = haar_state(8, &mut rng);
    let a = decoupling_trial(&psi, [2, 2, 2], 1, 0.0, 0.5, 99).unwrap();
    let b = decoupling_trial(&psi, [2, 2, 2], 1, 0.0, 0.5, 99).unwrap();
    assert_eq!(a.t_q.to_bits(), b.t_q.to_bits());
    assert_eq!(a.distance.to_bits(), b.distance.to_bits());
}

#[test]
fn decoupling_preconditions() {
    let psi = linalg::max_entangled(2);
    assert!(decoupling_trial(&psi, [2, 2, 1], 3, 0.0, 0.5, 0).is_err());
    assert!(decoupling_trial(&psi, [2, 2, 1], 0, 0.0, 0.5, 0).is_err());
    assert!(decoupling_trial(&(psi.clone() * r(2.0)), [2, 2, 1], 1, 0.0, 0.5, 0).is_err());
    assert!(berta_average(&psi, [2, 2, 1], 1, 9, 0).is_err());
}

#[test]
fn berta_exact_decoupling() {
    let psi = linalg::max_entangled(3);
    let b = berta_average(&psi, [3, 3, 1], 3, 10, 1).unwrap();
    assert!(b.mean < 1e-12 && b.holds());
}

#[test]
fn berta_full_rank_projector_on_entangled_ae() {
    // B trivial, d = |A|: the left side is ‖ψ^{AE} − ψ^A⊗ψ^E‖₁
    let mut rng = rng_from_seed(2);
    let psi: CVec = haar_state(6, &mut rng);
    let b = berta_average(&psi, [3, 1, 2], 3, 10, 4).unwrap();
    let ae = linalg::proj(&psi);
    let e = linalg::ptrace(&ae, &[3, 2], &[1]);
    let direct = linalg::trace_norm(&(&ae - linalg::kron(&(linalg::eye(3) * r(1.0 / 3.0)), &e)));
    assert!((b.mean - direct).abs() < 1e-10, "{} vs {direct}", b.mean);
    assert!(b.stderr < 1e-10);
}

#[test]
fn berta_random_state_mean_below_bound() {
    let mut rng = rng_from_seed(8);
    let psi = haar_state(4 * 2 * 2, &mut rng);
    let b = berta_average(&psi, [4, 2, 2], 2, 500, 21).unwrap();
    assert!(b.holds(), "{b:?}");
    assert!(b.mean <= b.bound, "{b:?}");
}
