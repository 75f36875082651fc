mod common;

use dgsim::dense::{self, born_probability, exp_quadratic, majorana, moments, DenseOp};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn majoranas_anticommute() {
    for n in 1..=4 {
        let gs: Vec<DenseOp> = (1..=2 * n).map(|j| majorana(n, j).unwrap()).collect();
        for (j, a) in gs.iter().enumerate() {
            for (k, b) in gs.iter().enumerate() {
                let ac = DenseOp::new(n, a.mul(b).matrix() + b.mul(a).matrix()).unwrap();
                let want = if j == k { DenseOp::identity(n).scale(Complex64::new(2.0, 0.0)) } else { DenseOp::new(n, ac.matrix() * Complex64::new(0.0, 0.0)).unwrap() };
                assert_eq!(ac.max_abs_diff(&want), 0.0, "n={n} j={j} k={k}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn moments_reconstruct(seed in any::<u64>(), n in 1usize..=3) {
        let (_, rho) = common::state_pair(&mut common::rng(seed), n, false);
        prop_assert!(moments(&rho).reconstruct().max_abs_diff(&rho) < 1e-9);
    }

    #[test]
    fn exp_quadratic_is_unitary(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = common::rng(seed);
        let h = common::antisym(&mut rng, 2 * n, 2.0);
        let d = common::vector(&mut rng, 2 * n, 2.0);
        prop_assert!(exp_quadratic(n, &h, &d).unwrap().unitarity_error() < 1e-10);
    }

    #[test]
    fn born_probabilities_sum_to_one(seed in any::<u64>(), n in 1usize..=4) {
        let (_, rho) = common::state_pair(&mut common::rng(seed), n, false);
        let lines: Vec<usize> = (1..=n).collect();
        let total: f64 = (0..1usize << n)
            .map(|v| {
                let x: Vec<bool> = (0..n).map(|b| v >> b & 1 == 1).collect();
                born_probability(&rho, &lines, &x).unwrap()
            })
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }
}

#[test]
fn dense_cap_is_enforced() {
    assert!(dense::exp_quadratic(7, &dgsim::linalg::AntisymMat::zeros(14), &[0.0; 14]).is_err());
}
