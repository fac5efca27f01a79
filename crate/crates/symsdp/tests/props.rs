use proptest::prelude::*;
use psc_degradable::{extract_symmetric_channel, schur_direct_dilation};
use psc_matqi::linalg::{self, c, r, CMat};
use psc_matqi::{random_density, rng_from_seed};
use psc_symsdp::*;

fn schur_state(s01: f64, phase: f64, n: usize) -> MultiSymmetricState {
    let z = c(s01 * phase.cos(), s01 * phase.sin());
    let s = CMat::from_row_slice(2, 2, &[r(1.0), z, z.conj(), r(1.0)]);
    let dil = schur_direct_dilation(&s).unwrap();
    let ext = extract_symmetric_channel(&dil, &linalg::max_entangled(2)).unwrap();
    from_extraction(&ext, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn primal_dominates_dual_candidates(s01 in 0.05f64..0.95, phase in 0.0f64..6.28, delta in 0.05f64..0.95, seed in 0u64..1000, scale in 0.1f64..3.0) {
        let st = schur_state(s01, phase, 1);
        prop_assert!(st.symmetry_residual() <= 1e-9);
        let [g, e, _] = st.dims();
        let mut rng = rng_from_seed(seed);
        let raw = DualCandidate { r: scale, s: 0.0, x: random_density(g * e, g * e, &mut rng) * r(scale) };
        let cand = make_feasible(&st, &raw).unwrap();
        let chk = dual_bound(&st, delta, &cand).unwrap();
        prop_assert!(chk.feasible);
        let primal = primal_value(&st, delta).unwrap();
        prop_assert!(chk.value <= primal + 1e-6);
    }

    #[test]
    fn two_site_states_are_symmetric(s01 in 0.0f64..1.0, phase in 0.0f64..6.28) {
        let st = schur_state(s01, phase, 2);
        prop_assert!(st.symmetry_residual() <= 1e-9);
        prop_assert!(st.subset_residual(&[0, 1]) <= 1e-9);
    }
}
