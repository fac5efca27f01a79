use psc_channels::zoo::random_channel;
use psc_channels::{make_channel, Zoo};
use psc_entropies::vn::coherent_information_raw;
use psc_entropies::{coherent_information, q1, von_neumann, Q1Options};
use psc_matqi::haar::{random_density, rng_from_seed};
use psc_matqi::linalg::{binary_entropy, eye, r, CMat, CVec};
use psc_matqi::{DensityOperator, SystemLabel};

fn mixed(d: usize) -> DensityOperator {
    DensityOperator::maximally_mixed(SystemLabel::of("A'", d))
}

#[test]
fn von_neumann_examples() {
    let pure = DensityOperator::single(psc_matqi::linalg::proj(&psc_matqi::linalg::ket(2, 0)), "A").unwrap();
    assert!(von_neumann(&pure).unwrap().abs() < 1e-12);
    assert!((von_neumann(&mixed(2)).unwrap() - 1.0).abs() < 1e-12);
    let d = DensityOperator::single(CMat::from_diagonal(&CVec::from_vec(vec![r(0.9), r(0.1)])), "A").unwrap();
    // h(0.1) = −0.1 log 0.1 − 0.9 log 0.9
    let h = -0.1 * 0.1f64.log2() - 0.9 * 0.9f64.log2();
    assert!((von_neumann(&d).unwrap() - h).abs() < 1e-12);
    assert!((h - 0.46900).abs() < 1e-5);
    let sub = DensityOperator::single(eye(2) * r(0.25), "A").unwrap();
    assert!(von_neumann(&sub).is_err());
}

#[test]
fn coherent_information_examples() {
    let id = make_channel(&Zoo::Identity { d: 2 }).unwrap();
    assert!((coherent_information(&id, &mixed(2)).unwrap() - 1.0).abs() < 1e-12);
    for p in [0.1, 0.3] {
        let z = make_channel(&Zoo::Dephasing { p }).unwrap();
        let v = coherent_information(&z, &mixed(2)).unwrap();
        assert!((v - (1.0 - binary_entropy(p))).abs() < 1e-12);
    }
    let e = make_channel(&Zoo::Erasure { d: 2, q: 0.5 }).unwrap();
    assert!(coherent_information(&e, &mixed(2)).unwrap().abs() < 1e-12);
    assert!(coherent_information(&e, &mixed(3)).is_err());
}

#[test]
fn erasure_coherent_information_is_linear_in_input_entropy() {
    let mut rng = rng_from_seed(4);
    for q in [0.1, 0.3, 0.7] {
        let e = make_channel(&Zoo::Erasure { d: 2, q }).unwrap();
        for _ in 0..5 {
            let rho = random_density(2, 2, &mut rng);
            let s = psc_matqi::linalg::von_neumann_raw(&rho);
            assert!((coherent_information_raw(&e, &rho) - (1.0 - 2.0 * q) * s).abs() < 1e-10);
        }
    }
}

#[test]
fn q1_examples() {
    let o = Q1Options::default();
    let id = q1(&make_channel(&Zoo::Identity { d: 2 }).unwrap(), &o);
    assert!((id.value - 1.0).abs() < 1e-8);
    let z = q1(&make_channel(&Zoo::Dephasing { p: 0.1 }).unwrap(), &o);
    assert!((z.value - 0.53100).abs() < 1e-5);
    assert!((z.value - (1.0 - binary_entropy(0.1))).abs() < 1e-8);
    let e = q1(&make_channel(&Zoo::Erasure { d: 2, q: 0.3 }).unwrap(), &o);
    assert!((e.value - 0.4).abs() < 1e-8, "{}", e.value);
    assert!(e.grid_value.unwrap() <= e.value + 1e-12);
    assert!((psc_matqi::linalg::trace(&e.optimizer).re - 1.0).abs() < 1e-12);
    let e = q1(&make_channel(&Zoo::Erasure { d: 2, q: 0.7 }).unwrap(), &o);
    assert!(e.value.abs() < 1e-8, "{}", e.value);
}

#[test]
fn q1_dominates_maximally_mixed_input() {
    let mut rng = rng_from_seed(9);
    let o = Q1Options { restarts: 3, ..Default::default() };
    for _ in 0..5 {
        let ch = random_channel(3, 3, 2, &mut rng).unwrap();
        let res = q1(&ch, &o);
        let at_mixed = coherent_information(&ch, &mixed(3)).unwrap();
        assert!(res.value >= at_mixed - 1e-12);
        let ev = psc_matqi::linalg::eigvalsh(&res.optimizer);
        assert!(ev[0] >= -1e-12);
    }
}
