//! Thermal states of quadratic-plus-linear Hamiltonians and the way back
//! from a covariance to its generator.

use dgsim::dense::thermal_state;
use dgsim::linalg::AntisymMat;
use dgsim::state::{from_diagonal, from_thermal, to_thermal, DiagonalSpec};
use nalgebra::DMatrix;

fn main() -> dgsim::error::Result<()> {
    let mut h = DMatrix::zeros(4, 4);
    h[(0, 1)] = 0.8;
    h[(1, 0)] = -0.8;
    h[(1, 2)] = 0.25;
    h[(2, 1)] = -0.25;
    let h = AntisymMat::new(h)?;
    let d = [0.1, 0.0, -0.3, 0.2];
    let s = from_thermal(&h, &d)?;
    println!("canonical values {:?}", s.canonical_values());
    println!("|ρ − e^(−H)/Z| = {:.2e}", s.dense()?.max_abs_diff(&thermal_state(2, &h, &d)?));

    let (h2, d2) = to_thermal(&s)?;
    println!("recovered h error {:.2e}, d = {d2:.6?}", (h2.matrix() - h.matrix()).amax());

    // Pure modes sit at infinite inverse temperature.
    let pure = from_diagonal(&DiagonalSpec::new(vec![1.0, 0.5])?);
    println!("pure mode: {}", to_thermal(&pure).unwrap_err());
    Ok(())
}
