use psc_entropies::minmax::{hmax_fidelity_raw, hmax_raw, hmax_smooth_raw, hmin_raw, hmin_smooth_raw};
use psc_entropies::{hmax, hmin, hmin_smooth, EntropyQuery};
use psc_matqi::haar::{random_density, rng_from_seed};
use psc_matqi::linalg::{eye, kron, max_entangled, proj, r};
use psc_matqi::{PureState, SystemLabel};

fn bell() -> PureState {
    PureState::new(max_entangled(2), vec![SystemLabel::of("A", 2), SystemLabel::of("B", 2)]).unwrap()
}

#[test]
fn bell_state_values() {
    let q = EntropyQuery::pure(&bell(), &["A"], &["B"], 0.0).unwrap();
    let h = hmin(&q).unwrap();
    assert!((h.value + 1.0).abs() < 1e-7, "{}", h.value);
    assert!(h.gap <= 1e-6);
    let h = hmax(&q).unwrap();
    assert!((h.value + 1.0).abs() < 1e-7, "{}", h.value);
    let h = hmin_smooth(&q).unwrap();
    assert!((h.value + 1.0).abs() < 1e-7);
}

#[test]
fn product_with_mixed_target() {
    let sigma = random_density(2, 2, &mut rng_from_seed(3));
    let rho = kron(&(eye(2) * r(0.5)), &sigma);
    let h = hmin_raw(&rho, 2, 2).unwrap();
    assert!((h.value - 1.0).abs() < 1e-7, "{}", h.value);
}

#[test]
fn hmax_two_routes_agree() {
    let mut rng = rng_from_seed(11);
    for k in 0..10 {
        let rho = random_density(6, 1 + k % 4, &mut rng);
        let a = hmax_raw(&rho, 2, 3).unwrap().value;
        let b = hmax_fidelity_raw(&rho, 2, 3).unwrap().value;
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn smoothing_is_monotone() {
    let mut rng = rng_from_seed(12);
    for _ in 0..5 {
        let rho = random_density(4, 3, &mut rng);
        let h0 = hmin_raw(&rho, 2, 2).unwrap().value;
        let h1 = hmin_smooth_raw(&rho, 2, 2, 0.1).unwrap().value;
        let h3 = hmin_smooth_raw(&rho, 2, 2, 0.3).unwrap().value;
        assert!(h1 >= h0 - 1e-6 && h3 >= h1 - 1e-6, "{h0} {h1} {h3}");
        let m1 = hmax_smooth_raw(&rho, 2, 2, 0.1).unwrap().value;
        let m0 = hmax_raw(&rho, 2, 2).unwrap().value;
        assert!(m1 <= m0 + 1e-6);
        let _ = proj(&max_entangled(2));
    }
}

#[test]
fn block_smoothing_matches_pure_state_program() {
    use psc_entropies::{hmin_smooth_dual_value, pure_state_smooth_sdp};
    use psc_matqi::linalg;
    let mut rng = rng_from_seed(21);
    for eps in [0.1, 0.3, 0.6] {
        let psi = psc_matqi::haar_state(8, &mut rng);
        let rho_ge = linalg::ptrace_pure(&psi, &[2, 2, 2], &[0, 1]);
        let block = hmin_smooth_raw(&rho_ge, 2, 2, eps).unwrap().value;
        let delta = 1.0 - eps * eps;
        let sol = pure_state_smooth_sdp(&psi, [2, 2, 2], delta).unwrap();
        assert!((sol.entropy() - block).abs() < 1e-6, "{} vs {block}", sol.entropy());
        let chk = hmin_smooth_dual_value(&psi, [2, 2, 2], delta, &sol.candidate).unwrap();
        assert!(chk.feasible, "{chk:?}");
        assert!((chk.value - sol.primal).abs() < 1e-6, "{} vs {}", chk.value, sol.primal);
    }
}
