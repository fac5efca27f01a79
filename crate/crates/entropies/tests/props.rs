use proptest::prelude::*;
use psc_entropies::minmax::{hmax_raw, hmin_raw, hmin_smooth_raw};
use psc_matqi::haar::{random_density, rng_from_seed};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn min_entropy_bounded_by_max_entropy_and_dimension(seed in 0u64..1_000_000, rank in 1usize..5) {
        let rho = random_density(4, rank, &mut rng_from_seed(seed));
        let lo = hmin_raw(&rho, 2, 2).unwrap().value;
        let hi = hmax_raw(&rho, 2, 2).unwrap().value;
        prop_assert!(lo <= hi + 1e-6);
        prop_assert!(lo >= -1.0 - 1e-6 && hi <= 1.0 + 1e-6);
    }

    #[test]
    fn smoothing_never_decreases_min_entropy(seed in 0u64..1_000_000, e1 in 0.0f64..0.9, e2 in 0.0f64..0.9) {
        let rho = random_density(4, 3, &mut rng_from_seed(seed));
        let (a, b) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let ha = hmin_smooth_raw(&rho, 2, 2, a).unwrap().value;
        let hb = hmin_smooth_raw(&rho, 2, 2, b).unwrap().value;
        prop_assert!(hb >= ha - 1e-6, "{} {}", ha, hb);
    }
}
