use proptest::prelude::*;
use psc_channels::zoo::random_channel;
use psc_converse::*;
use psc_matqi::linalg::{self, r};
use psc_matqi::{random_density, rng_from_seed};

fn summed(rep: &ConverseBoundReport) -> f64 {
    rep.terms.iter().map(|t| t.value).sum()
}

proptest! {
    #[test]
    fn totals_are_term_sums(q1 in 0.0f64..3.0, a in 1usize..5, n in 1u64..1_000_000, eps in 0.001f64..0.7, delta in 0.0f64..0.2, mu in 0.0f64..8.0, ne in 0.0f64..50.0) {
        let r1 = thm1_bound(q1, a, n, eps, mu).unwrap();
        prop_assert!((r1.total - summed(&r1)).abs() <= 1e-12 * r1.total.abs().max(1.0));
        prop_assert!((r1.lambda - 0.25 * (0.5f64.sqrt() - eps)).abs() < 1e-15);
        let r3 = thm3_bound(q1, a, n, eps, mu, ne).unwrap();
        prop_assert!((r3.total - summed(&r3)).abs() <= 1e-12 * r3.total.abs().max(1.0));
        prop_assert!((r3.lambda - (1.0 - eps) / 5.0).abs() < 1e-15);
        let eta = (0.5f64.sqrt() - eps - 2.0 * delta) / 6.0;
        match thm2_bound(q1, a, n, eps, delta, mu) {
            Ok(r2) => {
                prop_assert!((r2.total - summed(&r2)).abs() <= 1e-12 * r2.total.abs().max(1.0));
                prop_assert!((r2.lambda - eta).abs() < 1e-15);
            }
            Err(_) => prop_assert!(eta <= 1e-12),
        }
        if eps < 0.5 {
            let w = weak_bound(q1, n, eps).unwrap();
            prop_assert!((w.total - (n as f64 * q1 + 1.0) / (1.0 - 2.0 * eps)).abs() <= 1e-9 * w.total.max(1.0));
        } else {
            prop_assert!(weak_bound(q1, n, eps).is_err());
        }
    }

    #[test]
    fn out_of_range_errors_are_rejected(q1 in 0.0f64..1.0, eps in 0.7072f64..3.0) {
        prop_assert!(thm1_bound(q1, 2, 100, eps, 1.0).is_err());
        prop_assert!(thm2_bound(q1, 2, 100, eps, 0.0, 1.0).is_err());
        prop_assert!(weak_bound(q1, 100, eps).is_err());
        prop_assert!(thm3_bound(q1, 2, 100, eps + 0.3, 1.0, 0.0).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn identical_environment_outputs_give_zero_privacy(seed in 0u64..10_000, m in 2usize..4) {
        let mut rng = rng_from_seed(seed);
        let ch = random_channel(2, 3, 2, &mut rng).unwrap();
        let rho = random_density(2, 2, &mut rng);
        let povm = vec![linalg::eye(3) * r(1.0 / m as f64); m];
        let code = PrivateCode::new(vec![rho; m], povm).unwrap();
        let met = private_code_metrics(&ch, &code).unwrap();
        prop_assert_eq!(met.privacy, 0.0);
        prop_assert!((0.0..=1.0).contains(&met.error));
    }

    #[test]
    fn private_metrics_lie_in_unit_interval(seed in 0u64..10_000) {
        let mut rng = rng_from_seed(seed);
        let ch = random_channel(2, 2, 2, &mut rng).unwrap();
        let signals = vec![random_density(2, 1, &mut rng), random_density(2, 2, &mut rng)];
        let p = random_density(2, 1, &mut rng);
        let code = PrivateCode::new(signals, vec![p.clone(), linalg::eye(2) - p]).unwrap();
        let met = private_code_metrics(&ch, &code).unwrap();
        prop_assert!((0.0..=1.0).contains(&met.error) && (0.0..=1.0).contains(&met.privacy));
    }

    #[test]
    fn decoder_fidelity_in_unit_interval(seed in 0u64..10_000) {
        let mut rng = rng_from_seed(seed);
        let ch = random_channel(2, 2, 3, &mut rng).unwrap();
        let res = optimal_decoder_fidelity(&ch, &linalg::max_entangled(2), 2).unwrap();
        prop_assert!(res.fidelity >= 0.5 - 1e-6 && res.fidelity <= 1.0);
    }
}
