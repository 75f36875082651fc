mod common;

use dgsim::dense::{self, moments};
use dgsim::unitary::{compile, compile_residual, compose, conjugate_monomial, Axis, DGUnitary, Gate};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn composition_is_a_homomorphism(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = common::rng(seed);
        let (u1, u2) = (common::unitary(&mut rng, n), common::unitary(&mut rng, n));
        let c = compose(&u1, &u2).unwrap();
        let want = u1.rotation().matrix() * u2.rotation().matrix();
        prop_assert!((c.rotation().matrix() - want).amax() < 1e-9);
    }

    #[test]
    fn compile_round_trip(seed in any::<u64>(), n in 1usize..=10) {
        let r = common::rotation(&mut common::rng(seed), 2 * n + 1);
        let seq = compile(&r).unwrap();
        prop_assert!(compile_residual(&seq, &r).unwrap() < 1e-7);
        prop_assert!(seq.gates.len() <= (2 * n + 1).pow(2));
    }

    #[test]
    fn even_rotations_avoid_the_displacement_axis(seed in any::<u64>(), n in 1usize..=6) {
        let u = common::even_unitary(&mut common::rng(seed), n);
        let seq = compile(u.rotation()).unwrap();
        let touches = |g: &Gate| matches!(g, Gate::Line1 { axis: Axis::X | Axis::Y, .. });
        prop_assert!(!seq.gates.iter().any(touches));
        prop_assert!(compile_residual(&seq, u.rotation()).unwrap() < 1e-7);
    }
}

#[test]
fn gate_count_scales_cubically_up_to_64_lines() {
    let mut rng = common::rng(9);
    for n in [16, 32, 64] {
        let r = common::rotation(&mut rng, 2 * n + 1);
        let seq = compile(&r).unwrap();
        let c = seq.gates.len() as f64 / (n as f64).powi(3);
        assert!(c <= 9.0, "n={n}: C = {c}");
        assert!(compile_residual(&seq, &r).unwrap() < 1e-7);
    }
}

#[test]
fn conjugated_monomials_match_oracle() {
    let mut rng = common::rng(10);
    for n in 1..=3 {
        let u = common::unitary(&mut rng, n);
        let ud = u.dense().unwrap();
        let scale = 1.0 / f64::from(1 << n);
        for mask in 0usize..1 << (2 * n) {
            let idx: Vec<usize> = (1..=2 * n).filter(|j| mask >> (j - 1) & 1 == 1).collect();
            if idx.len() > 4 {
                continue;
            }
            let got = conjugate_monomial(&u, &idx, 1 << 20).unwrap();
            let a = dense::majorana_monomial(n, &idx).unwrap().conjugated_by(&ud);
            for (k, v) in moments(&a).iter() {
                let c = got.get(&k).copied().unwrap_or_default();
                assert!((v * scale - c).norm() < 1e-9, "n={n} J={idx:?} K={k:?}: {} vs {c}", v * scale);
            }
        }
    }
}

#[test]
fn generator_round_trips_through_rotation() {
    let mut rng = common::rng(11);
    let h = common::antisym(&mut rng, 4, 0.5);
    let d = common::vector(&mut rng, 4, 0.5);
    let u = DGUnitary::new(h.clone(), d.clone()).unwrap();
    let v = DGUnitary::from_rotation(u.rotation().clone()).unwrap();
    let (h2, d2) = v.generator().unwrap();
    assert!((h2.matrix() - h.matrix()).amax() < 1e-9);
    assert!(d.iter().zip(&d2).all(|(a, b)| (a - b).abs() < 1e-9));
    assert!(u.dense().unwrap().projective_distance(&v.dense().unwrap()) < 1e-9);
}
