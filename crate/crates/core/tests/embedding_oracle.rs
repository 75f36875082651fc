mod common;

use dgsim::dense::{self, real_extended_covariance, DenseOp};
use dgsim::embedding::*;
use dgsim::state::{from_diagonal, DiagonalSpec};
use dgsim::unitary::{conjugate_state, DGUnitary};
use num_complex::Complex64;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ket(n: usize, terms: &[usize]) -> DenseOp {
    let mut amps = vec![c(0.0); 1 << n];
    for &t in terms {
        amps[t] = c(1.0);
    }
    DenseOp::from_state_vector(n, &amps).unwrap()
}

#[test]
fn embedded_covariance_matches_dense_for_pure_states() {
    let mut rng = common::rng(11);
    for n in 1..=3 {
        for _ in 0..4 {
            let s = common::pure_state(&mut rng, n);
            let e = embed_state(&s).unwrap();
            let dense_e = embed_dense(&s.dense().unwrap()).unwrap();
            let dev = common::max_abs(e.state.extended(), &real_extended_covariance(&dense_e));
            assert!(dev < 1e-9, "n={n}: {dev}");
            assert!((e.state.purity() - dense_e.purity()).abs() < 1e-9);
            assert!(e.state.is_even(1e-12));
        }
    }
}

#[test]
fn embedding_of_mixed_state_is_not_gaussian() {
    // Documented limitation: E(ρ) leaves the Gaussian family for mixed ρ.
    let mut rng = common::rng(12);
    let s = common::state(&mut rng, 2);
    let e = embed_dense(&s.dense().unwrap()).unwrap();
    assert!(dense::wick_deviation(&e) > 1e-3);
    let mm = from_diagonal(&DiagonalSpec::new(vec![0.0, 0.0]).unwrap());
    let e = embed_dense(&mm.dense().unwrap()).unwrap();
    assert!(real_extended_covariance(&e).amax() < 1e-14);
}

#[test]
fn unitary_embedding_matches_dense() {
    let mut rng = common::rng(13);
    for n in 1..=3 {
        let u = common::unitary(&mut rng, n);
        let ut = embed_unitary(&u).unwrap();
        let want = embed_unitary_dense(&u.dense().unwrap()).unwrap();
        let dist = ut.dense().unwrap().projective_distance(&want);
        assert!(dist < 1e-9, "n={n}: {dist}");
        // Compatibility E(UρU†) = Ũ E(ρ) Ũ† on covariances.
        let s = common::pure_state(&mut rng, n);
        let lhs = embed_state(&conjugate_state(&u, &s).unwrap()).unwrap().state;
        let rhs = conjugate_state(&ut, &embed_state(&s).unwrap().state).unwrap();
        assert!(common::max_abs(lhs.extended(), rhs.extended()) < 1e-9);
    }
}

#[test]
fn clifford_decomposition_reproduces_v() {
    for n in 1..=3 {
        let p = clifford_product(&embed_v_gates(n), n + 1).unwrap();
        assert!(p.projective_distance(&dense::embed_v(n).unwrap()) < 1e-12, "n={n}");
    }
}

#[test]
fn verdicts_on_reference_cases() {
    let ghz4 = ket(4, &[0, 15]);
    let t = gaussian_state_test(&ghz4).unwrap();
    assert_eq!(t.verdict, Verdict::NonGaussian);
    assert!((t.overlap - 0.5625).abs() < 1e-10, "{}", t.overlap);

    let w3 = ket(3, &[0b000, 0b011, 0b101, 0b110]);
    let t = gaussian_state_test(&w3).unwrap();
    assert!((t.overlap - 1.0).abs() < 1e-10);

    let ghz3 = ket(3, &[0, 7]);
    assert_eq!(displaced_state_test(&ghz3).unwrap().verdict, Verdict::NonGaussian);

    let quartic = {
        let g = dense::majorana_monomial(2, &[1, 2, 3, 4]).unwrap();
        dense::exp_anti_hermitian(&g.scale(Complex64::new(0.0, std::f64::consts::FRAC_PI_4)))
    };
    assert_eq!(gaussian_unitary_test(&quartic).unwrap().verdict, Verdict::NonGaussian);
    let cz13 = dense::cz(3, 1, 3).unwrap();
    assert_eq!(displaced_unitary_test(&cz13).unwrap().verdict, Verdict::NonGaussian);

    let mut rng = common::rng(14);
    let u = common::unitary(&mut rng, 3);
    assert_eq!(displaced_unitary_test(&u.dense().unwrap()).unwrap().verdict, Verdict::Gaussian);
    let even = common::even_unitary(&mut rng, 4);
    assert_eq!(gaussian_unitary_test(&even.dense().unwrap()).unwrap().verdict, Verdict::Gaussian);
    let _ = DGUnitary::identity(1);
}
