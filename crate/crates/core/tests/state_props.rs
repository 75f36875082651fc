mod common;

use dgsim::error::Error;
use dgsim::linalg::AntisymMat;
use dgsim::state::{from_thermal, to_thermal, validate, wick_dense, DGaussState};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn wick_matches_oracle(seed in any::<u64>(), n in 1usize..=3) {
        let (s, rho) = common::state_pair(&mut common::rng(seed), n, false);
        for (idx, v) in dgsim::dense::moments(&rho).iter() {
            prop_assert!((s.wick_moment(&idx).unwrap() - v).norm() < 1e-8);
        }
    }

    #[test]
    fn purity_matches_dense(seed in any::<u64>(), n in 1usize..=3, pure in any::<bool>()) {
        let (s, rho) = common::state_pair(&mut common::rng(seed), n, pure);
        prop_assert!((s.purity() - rho.purity()).abs() < 1e-8);
        prop_assert_eq!(s.is_pure(), pure);
    }

    #[test]
    fn thermal_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = common::rng(seed);
        let h = common::antisym(&mut rng, 2 * n, 1.0);
        let d = common::vector(&mut rng, 2 * n, 1.0);
        let s = from_thermal(&h, &d).unwrap();
        let (h2, d2) = to_thermal(&s).unwrap();
        prop_assert!((h2.matrix() - h.matrix()).amax() < 1e-8);
        prop_assert!(d.iter().zip(&d2).all(|(a, b)| (a - b).abs() < 1e-8));
    }
}

/// Extended carrier with canonical values drawn across the admissibility
/// boundary `λ = 1`.
fn carrier(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let dim = 2 * n + 1;
    let mut c = DMatrix::zeros(dim, dim);
    for j in 0..n {
        let l = rng.gen_range(0.0..1.3);
        c[(2 * j, 2 * j + 1)] = -l;
        c[(2 * j + 1, 2 * j)] = l;
    }
    let r = common::rotation(rng, dim);
    let m = r.matrix() * c * r.matrix().transpose();
    (&m - m.transpose()) * 0.5
}

#[test]
fn validate_accepts_exactly_the_psd_states() {
    let mut rng = common::rng(77);
    let (mut accepted, mut rejected) = (0, 0);
    for i in 0..200 {
        let n = 1 + i % 3;
        let m = carrier(&mut rng, n);
        let report = validate(&AntisymMat::new(m.map(|x| Complex64::new(0.0, x))).unwrap()).unwrap();
        let min_eig = wick_dense(&m).hermitian_eigenvalues()[0];
        assert_eq!(report.valid, min_eig >= -1e-9, "seed {i}: λ = {:?}, min eig {min_eig}", report.lambdas);
        assert_eq!(DGaussState::from_extended(&AntisymMat::new(m).unwrap()).is_ok(), report.valid);
        if report.valid { accepted += 1 } else { rejected += 1 }
    }
    assert!(accepted > 20 && rejected > 20, "{accepted} accepted, {rejected} rejected");
}

#[test]
fn pure_modes_have_no_thermal_generator() {
    let s = dgsim::state::from_diagonal(&dgsim::state::DiagonalSpec::new(vec![1.0, 0.3]).unwrap());
    assert!(matches!(to_thermal(&s), Err(Error::Saturated { modes }) if modes == vec![1]));
}
