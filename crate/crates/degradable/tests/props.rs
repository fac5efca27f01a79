use proptest::prelude::*;
use psc_channels::{make_channel, Zoo};
use psc_degradable::*;
use psc_matqi::haar::{haar_state, rng_from_seed};
use psc_matqi::linalg::{self, CMat};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn schur_channels_are_degradable_with_symmetric_lifts(seed in 0u64..10_000, d in 2usize..4, k in 1usize..3) {
        let mut rng = rng_from_seed(seed);
        let cols: Vec<_> = (0..d).map(|_| haar_state(k, &mut rng)).collect();
        let phi = CMat::from_columns(&cols);
        let s = linalg::hermitize(&(phi.adjoint() * phi));
        let ch = make_channel(&Zoo::Schur { s }).unwrap();
        let cert = certify_degradability(&ch).unwrap();
        prop_assert!(cert.is_degradable());
        let dil = symmetrized_dilation(&ch, cert.degrading_choi().unwrap()).unwrap();
        prop_assert!(dil.symmetry_residual() <= 1e-8);
        prop_assert!(dil.complement_residual() <= 1e-8);
        let lift = type_i_lift(&ch, &dil).unwrap();
        prop_assert!(lift.subspace_residual().unwrap() <= 1e-8);
    }
}
