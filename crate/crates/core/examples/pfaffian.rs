//! Pfaffians, canonical forms and the exponential of an antisymmetric matrix.

use dgsim::linalg::{block_diagonalize, expm_antisym, AntisymMat};
use nalgebra::DMatrix;

fn main() -> dgsim::error::Result<()> {
    let m = AntisymMat::new(DMatrix::from_row_slice(
        4,
        4,
        &[0.0, 1.0, 2.0, 3.0, -1.0, 0.0, 4.0, 5.0, -2.0, -4.0, 0.0, 6.0, -3.0, -5.0, -6.0, 0.0],
    ))?;
    // Pf = a12·a34 − a13·a24 + a14·a23 = 6 − 10 + 12.
    println!("Pf(M) = {}", m.pfaffian()?);
    println!("det(M) = {}", m.matrix().clone().determinant());
    println!("Pf of rows/cols {{1, 3}} = {}", m.pfaffian_restricted(&[1, 3])?);

    let (r, lambdas) = block_diagonalize(&m);
    println!("canonical values {lambdas:?}");
    println!("R M Rᵀ = {:.6}", r.matrix() * m.matrix() * r.matrix().transpose());

    let rot = expm_antisym(&m);
    println!("|exp(M)ᵀexp(M) − I| = {:.2e}", (rot.matrix().transpose() * rot.matrix() - DMatrix::identity(4, 4)).amax());
    Ok(())
}
