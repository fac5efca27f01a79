use psc_converse::*;
use psc_matqi::linalg::{self, r, CMat};
use psc_matqi::{haar_state, random_density, rng_from_seed, symmetric_projector};

fn symmetrize(rho: &CMat, d: usize, n: usize) -> CMat {
    let perms = psc_entropies::aep::permutations(n);
    let dims = vec![d; n];
    let mut out = linalg::zeros(rho.nrows(), rho.ncols());
    for p in &perms {
        out += linalg::permute_op(rho, &dims, p);
    }
    out * r(1.0 / perms.len() as f64)
}

#[test]
fn pure_product_power_is_dominated() {
    let mut rng = rng_from_seed(3);
    for (d, n) in [(2, 2), (2, 3), (3, 2), (2, 4)] {
        let psi = haar_state(d, &mut rng);
        let pn = linalg::kron_all(&vec![&linalg::proj(&psi); n]);
        let c = definetti_dominance_pure(&pn, d, n).unwrap();
        assert!(c.min_eigenvalue >= -1e-12, "({d},{n}): {c:?}");
    }
}

#[test]
fn normalized_symmetric_projector() {
    let (p, dim) = symmetric_projector(2, 2).unwrap();
    assert_eq!(dim, 3);
    let rho = p * r(1.0 / 3.0);
    assert!(definetti_dominance(&rho, 2, 2).unwrap().min_eigenvalue >= 0.0);
    assert!(definetti_dominance_pure(&rho, 2, 2).unwrap().min_eigenvalue >= -1e-12);
}

#[test]
fn random_invariant_states() {
    let mut rng = rng_from_seed(17);
    for _ in 0..5 {
        let rho = symmetrize(&random_density(8, 8, &mut rng), 2, 3);
        let c = definetti_dominance(&rho, 2, 3).unwrap();
        assert!(c.min_eigenvalue >= -1e-9, "{c:?}");
        assert!(c.invariance_residual < 1e-12);
        assert_eq!(c.prefactor, 81.0);
    }
}

#[test]
fn rejects_non_invariant_input() {
    let rho = linalg::kron(&linalg::proj(&linalg::ket(2, 0)), &linalg::proj(&linalg::ket(2, 1)));
    assert!(matches!(definetti_dominance(&rho, 2, 2), Err(Error::NotPermutationInvariant(_))));
    assert!(definetti_dominance(&linalg::eye(3), 2, 2).is_err());
}
