//! Compiles the unitary generated by a quadratic-plus-linear Hamiltonian into
//! matchgates and line-1 rotations, then checks it against the dense unitary.

use dgsim::linalg::AntisymMat;
use dgsim::unitary::{compile, compile_residual, DGUnitary};
use nalgebra::DMatrix;

fn main() -> dgsim::error::Result<()> {
    let n = 3;
    let h = DMatrix::from_fn(2 * n, 2 * n, |j, k| if j == k { 0.0 } else { 0.1 * (k as f64 - j as f64) });
    let d: Vec<f64> = (0..2 * n).map(|j| 0.05 * j as f64).collect();
    let u = DGUnitary::new(AntisymMat::new(h)?, d)?;
    let seq = compile(u.rotation())?;
    for g in seq.gates.iter().take(6) {
        println!("{}", serde_json::to_string(g).expect("gates serialize"));
    }
    println!("... {} gates in total, count/n³ = {:.3}", seq.gates.len(), seq.gates.len() as f64 / (n * n * n) as f64);
    println!("rotation residual {:.2e}", compile_residual(&seq, u.rotation())?);
    println!("dense distance {:.2e}", seq.dense()?.projective_distance(&u.dense()?));
    Ok(())
}
