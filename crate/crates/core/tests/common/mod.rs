#![allow(dead_code)]

use dgsim::linalg::{expm_antisym, AntisymMat, Rotation};
use dgsim::state::{from_diagonal, DGaussState, DiagonalSpec};
use dgsim::unitary::{conjugate_state, DGUnitary};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn antisym(rng: &mut impl Rng, dim: usize, scale: f64) -> AntisymMat {
    let mut m = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        for k in j + 1..dim {
            let v = scale * rng.gen_range(-1.0..1.0);
            m[(j, k)] = v;
            m[(k, j)] = -v;
        }
    }
    AntisymMat::new(m).unwrap()
}

pub fn vector(rng: &mut impl Rng, len: usize, scale: f64) -> Vec<f64> {
    (0..len).map(|_| scale * rng.gen_range(-1.0..1.0)).collect()
}

pub fn unitary(rng: &mut impl Rng, n: usize) -> DGUnitary {
    DGUnitary::new(antisym(rng, 2 * n, 1.0), vector(rng, 2 * n, 1.0)).unwrap()
}

pub fn even_unitary(rng: &mut impl Rng, n: usize) -> DGUnitary {
    DGUnitary::new(antisym(rng, 2 * n, 1.0), vec![0.0; 2 * n]).unwrap()
}

pub fn rotation(rng: &mut impl Rng, dim: usize) -> Rotation {
    expm_antisym(&antisym(rng, dim, 2.0))
}

/// Random admissible displaced Gaussian state with canonical values in
/// [-1, 1].
pub fn state(rng: &mut impl Rng, n: usize) -> DGaussState {
    let lambdas = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let d = from_diagonal(&DiagonalSpec::new(lambdas).unwrap());
    conjugate_state(&unitary(rng, n), &d).unwrap()
}

pub fn pure_state(rng: &mut impl Rng, n: usize) -> DGaussState {
    let lambdas = (0..n).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
    let d = from_diagonal(&DiagonalSpec::new(lambdas).unwrap());
    conjugate_state(&unitary(rng, n), &d).unwrap()
}

pub fn max_abs(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

/// Random state together with a dense copy built without the covariance
/// path: a product of `(I + λZ)/2` conjugated by the dense exponential of the
/// unitary's generator.
pub fn state_pair(rng: &mut impl Rng, n: usize, pure: bool) -> (DGaussState, dgsim::dense::DenseOp) {
    let lambdas: Vec<f64> = (0..n)
        .map(|_| if pure { if rng.gen_bool(0.5) { 1.0 } else { -1.0 } } else { rng.gen_range(-1.0..1.0) })
        .collect();
    let u = unitary(rng, n);
    let s = conjugate_state(&u, &from_diagonal(&DiagonalSpec::new(lambdas.clone()).unwrap())).unwrap();
    let blochs: Vec<[f64; 3]> = lambdas.iter().map(|&l| [0.0, 0.0, l]).collect();
    let rho = dgsim::dense::product_state(&blochs).unwrap().conjugated_by(&u.dense().unwrap());
    (s, rho)
}
