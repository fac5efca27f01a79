use psc_channels::{complementary, make_channel, Channel, Zoo};
use psc_degradable::*;
use psc_matqi::haar::{haar_state, rng_from_seed};
use psc_matqi::linalg::{self, c, r, CMat};

fn erasure(q: f64) -> Channel {
    make_channel(&Zoo::Erasure { d: 2, q }).unwrap()
}

fn dephasing(p: f64) -> Channel {
    make_channel(&Zoo::Dephasing { p }).unwrap()
}

/// Erasure on the qubit block of a qubit-plus-flag input, fixing the flag.
fn erasure_on_output(t: f64) -> Channel {
    let mut keep = linalg::zeros(3, 3);
    keep[(0, 0)] = r((1.0 - t).sqrt());
    keep[(1, 1)] = r((1.0 - t).sqrt());
    let mut ks = vec![keep];
    for i in 0..3 {
        let mut k = linalg::zeros(3, 3);
        k[(2, i)] = r(if i == 2 { 1.0 } else { t.sqrt() });
        ks.push(k);
    }
    Channel::new(ks).unwrap()
}

fn gram(seed: u64, d: usize, k: usize) -> CMat {
    let mut rng = rng_from_seed(seed);
    let cols: Vec<_> = (0..d).map(|_| haar_state(k, &mut rng)).collect();
    let phi = CMat::from_columns(&cols);
    linalg::hermitize(&(phi.adjoint() * phi))
}

/// Choi matrix of erasure on the qubit block plus |*⟩ ↦ |*⟩, restricted to the
/// input pairs inside {0,1}×{0,1} and (*,*), where every degrading map of an erasure channel agrees.
fn block_diagonal(j: &CMat) -> CMat {
    let mut out = j.clone();
    for i in 0..3 {
        for k in 0..3 {
            if (i == 2) != (k == 2) {
                for a in 0..3 {
                    for b in 0..3 {
                        out[(i * 3 + a, k * 3 + b)] = c(0.0, 0.0);
                    }
                }
            }
        }
    }
    out
}

fn lemma1(ch: &Channel) -> TypeIDilation {
    let cert = certify_degradability(ch).unwrap();
    symmetrized_dilation(ch, cert.degrading_choi().expect("degradable")).unwrap()
}

#[test]
fn zoo_verdicts() {
    let cases = [
        (erasure(0.3), Verdict::Degradable),
        (erasure(0.5), Verdict::Symmetric),
        (erasure(0.7), Verdict::AntiDegradable),
        (dephasing(0.2), Verdict::Degradable),
        (make_channel(&Zoo::Depolarizing { d: 2, p: 0.1 }).unwrap(), Verdict::Neither),
    ];
    for (ch, want) in cases {
        let cert = certify_degradability(&ch).unwrap();
        assert_eq!(cert.verdict, want);
        if cert.is_degradable() {
            assert!(cert.degrading.residual <= 1e-6);
            psc_channels::ChoiMatrix::new(cert.degrading.choi.clone(), cert.dim_out, cert.dim_env).unwrap();
        }
        if want == Verdict::Neither {
            assert!(cert.degrading.slack > NO_SLACK && cert.anti_degrading.slack > NO_SLACK);
        }
    }
}

#[test]
fn erasure_grid_flips_at_one_half() {
    for k in 0..=10 {
        let q = k as f64 / 10.0;
        let cert = certify_degradability(&erasure(q)).unwrap();
        assert_eq!(cert.is_degradable(), q <= 0.5 + 1e-9, "q = {q}: {:?}", cert.verdict);
        assert_eq!(cert.is_anti_degradable(), q >= 0.5 - 1e-9, "q = {q}: {:?}", cert.verdict);
        let feasible = if cert.is_degradable() { &cert.degrading } else { &cert.anti_degrading };
        assert!(feasible.residual <= 1e-6);
    }
}

#[test]
fn erasure_degrading_map_is_erasure() {
    // E_t ∘ E_q erases with probability q + (1−q)t, which must equal 1 − q
    let q = 0.3;
    let t = (1.0 - 2.0 * q) / (1.0 - q);
    let cert = certify_degradability(&erasure(q)).unwrap();
    let j = cert.degrading_choi().unwrap();
    let comp = complementary(&erasure(q));
    assert_eq!(comp.dout(), 3);
    let composed = compose_choi(j, &erasure(q), 3);
    assert!(linalg::norm_herm(&(composed - &comp.choi().matrix)) < 1e-9);

    let e_t = erasure_on_output(t);
    let ident = e_t.compose(&erasure(q)).unwrap();
    let direct = erasure(1.0 - q);
    assert!(linalg::max_abs(&(&ident.choi().matrix - &direct.choi().matrix)) < 1e-12);

    // t = q/(1−q) composes to E_{2q}, which differs from E_{1−q} at q = 0.3
    let naive = erasure_on_output(q / (1.0 - q)).compose(&erasure(q)).unwrap();
    assert!(linalg::max_abs(&(&naive.choi().matrix - &direct.choi().matrix)) > 0.05);
}

#[test]
fn recovered_map_matches_erasure_in_canonical_basis() {
    // fit against E_{1−q} itself so the environment basis is the erasure-output basis
    let q = 0.3;
    let t = (1.0 - 2.0 * q) / (1.0 - q);
    let ch = erasure(q);
    let target = erasure(1.0 - q);
    let fit = fit_post_processing(&ch, &target, "degrading").unwrap();
    assert!(fit.residual < 1e-9);
    let want = erasure_on_output(t).choi().matrix.clone();
    assert!(linalg::max_abs(&(block_diagonal(&fit.choi) - block_diagonal(&want))) < 1e-7);
}

#[test]
fn symmetrized_dilations() {
    let s = gram(5, 3, 2);
    let chans = [erasure(0.3), dephasing(0.2), make_channel(&Zoo::Schur { s }).unwrap()];
    for ch in &chans {
        let d = lemma1(ch);
        assert!(d.symmetry_residual() <= 1e-10, "{}", d.symmetry_residual());
        assert!(d.involution_residual() <= 1e-12);
        assert!(d.complement_residual() <= 1e-8);
        assert!(d.isometry_residual() <= 1e-10);
        let n = d.channel().unwrap();
        assert!(linalg::max_abs(&(&n.choi().matrix - &ch.choi().matrix)) <= 1e-10);
    }
}

#[test]
fn schur_direct_dilation_is_type_i() {
    let s = CMat::from_row_slice(2, 2, &[r(1.0), r(0.5f64.sqrt()), r(0.5f64.sqrt()), r(1.0)]);
    let d = schur_direct_dilation(&s).unwrap();
    assert!(d.symmetry_residual() <= 1e-14);
    assert_eq!(d.x_f, linalg::eye(2));
    let n = d.channel().unwrap();
    let want = make_channel(&Zoo::Schur { s }).unwrap();
    assert!(linalg::max_abs(&(&n.choi().matrix - &want.choi().matrix)) <= 1e-14);
    assert!(d.complement_residual() <= 1e-14);
}

#[test]
fn lifts_are_type_i() {
    for ch in [dephasing(0.2), erasure(0.3)] {
        let d = lemma1(&ch);
        let lift = type_i_lift(&ch, &d).unwrap();
        let ld = &lift.dilation;
        assert_eq!(ld.x_f, linalg::eye(ld.dim_f));
        assert!(ld.symmetry_residual() <= 1e-10);
        assert!(lift.subspace_residual().unwrap() <= 1e-10);
        assert!(ld.complement_residual() <= 1e-10);
        assert!(ld.isometry_residual() <= 1e-10);
        // Ũ dilates Ñ, and Ñ(ρ) has B₀-marginal 1/2
        let n = ld.channel().unwrap();
        assert!(linalg::max_abs(&(&n.choi().matrix - &lift.channel.choi().matrix)) <= 1e-10);
        let rho = CMat::from_row_slice(2, 2, &[r(0.7), c(0.1, 0.2), c(0.1, -0.2), r(0.3)]);
        let out = lift.channel.apply_raw(&rho);
        let b0 = linalg::ptrace(&out, &[ch.dout(), 2], &[1]);
        assert!(linalg::max_abs(&(b0 - linalg::eye(2) * r(0.5))) < 1e-14);
    }
}

#[test]
fn lift_rejects_non_involution() {
    let ch = dephasing(0.2);
    let mut d = lemma1(&ch);
    d.x_f *= r(2.0);
    assert!(matches!(type_i_lift(&ch, &d), Err(Error::NotInvolution(_))));
}

fn extraction_cases() -> Vec<(&'static str, TypeIDilation)> {
    let z = dephasing(0.2);
    let s_z = CMat::from_row_slice(2, 2, &[r(1.0), r(0.6), r(0.6), r(1.0)]);
    let e = erasure(0.3);
    let s = gram(11, 3, 2);
    let sc = make_channel(&Zoo::Schur { s }).unwrap();
    vec![
        ("Z direct", schur_direct_dilation(&s_z).unwrap()),
        ("Z lift", type_i_lift(&z, &lemma1(&z)).unwrap().dilation),
        ("erasure lift", type_i_lift(&e, &lemma1(&e)).unwrap().dilation),
        ("schur lift", type_i_lift(&sc, &lemma1(&sc)).unwrap().dilation),
    ]
}

#[test]
fn symmetric_extraction_and_reconstruction() {
    let mut rng = rng_from_seed(3);
    for (name, d) in extraction_cases() {
        let phi0 = linalg::max_entangled(d.dim_in);
        let ext = extract_symmetric_channel(&d, &phi0).unwrap();
        assert!(ext.swap_residual <= 1e-9, "{name}: {}", ext.swap_residual);
        assert!(ext.isometry_residual() <= 1e-9);
        assert!(ext.dim_g() <= d.dim_in * d.dim_f);

        let same = decompose_via_symmetric(&ext, &d, &phi0).unwrap();
        assert!(same.residual <= 1e-10);
        assert!(linalg::max_abs(&(&same.w_hat - &ext.g_basis)) <= 1e-9);
        assert!((same.xi.clone() - ext.chi_vector()).norm() <= 1e-9);

        for _ in 0..20 {
            let phi = haar_state(d.dim_in * d.dim_in, &mut rng);
            let dec = decompose_via_symmetric(&ext, &d, &phi).unwrap();
            assert!(dec.residual <= 1e-7, "{name}: {}", dec.residual);
            assert!((dec.xi.norm() - 1.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn extraction_needs_type_i_and_full_rank() {
    let ch = dephasing(0.2);
    let d = lemma1(&ch);
    let phi0 = linalg::max_entangled(2);
    assert!(matches!(extract_symmetric_channel(&d, &phi0), Err(Error::NotTypeI(_))));
    let lifted = type_i_lift(&ch, &d).unwrap().dilation;
    let product = linalg::kron_vec(&linalg::ket(2, 0), &linalg::ket(2, 1));
    assert!(matches!(extract_symmetric_channel(&lifted, &product), Err(Error::RankDeficient { rank: 1, need: 2 })));
}

#[test]
fn degradable_identity_on_random_inputs() {
    let mut rng = rng_from_seed(17);
    for ch in [erasure(0.3), dephasing(0.2)] {
        let d = lemma1(&ch);
        for _ in 0..50 {
            let phi = haar_state(4, &mut rng);
            let chk = degradable_identity(&d, &phi, 2).unwrap();
            assert!(chk.max_violation() <= 1e-7, "{chk:?}");
        }
        // the maximally mixed input gives the coherent information of the channel
        let rho = linalg::eye(2) * r(0.5);
        let chk = coherent_information_via_degrading(&d, &rho).unwrap();
        let direct = linalg::von_neumann_raw(&ch.apply_raw(&rho)) - linalg::von_neumann_raw(&complementary(&ch).apply_raw(&rho));
        assert!((chk.s_f_given_e_prime - direct).abs() <= 1e-9);
    }
}
