//! A displaced Gaussian state, its Majorana moments from Pfaffians, and the
//! same moments read off the dense density matrix.

use dgsim::dense::moments;
use dgsim::linalg::AntisymMat;
use dgsim::state::{from_diagonal, DiagonalSpec};
use dgsim::unitary::{conjugate_state, DGUnitary};
use nalgebra::DMatrix;

fn main() -> dgsim::error::Result<()> {
    let n = 2;
    let vacuum = from_diagonal(&DiagonalSpec::new(vec![1.0, 0.4])?);
    let mut h = DMatrix::zeros(4, 4);
    h[(1, 2)] = 0.3;
    h[(2, 1)] = -0.3;
    let u = DGUnitary::new(AntisymMat::new(h)?, vec![0.2, 0.0, 0.0, -0.1])?;
    let s = conjugate_state(&u, &vacuum)?;
    println!("extended carrier M̃ = {:.6}", s.extended());

    let table = moments(&s.dense()?);
    for idx in [vec![1], vec![1, 2], vec![2, 3], vec![1, 2, 3], vec![1, 2, 3, 4]] {
        let w = s.wick_moment(&idx)?;
        println!("J = {idx:?}: Pfaffian {w:.6}, dense {:.6}", table.get(&idx)?);
    }
    println!("purity {:.6}, pure: {}, n = {n}", s.purity(), s.is_pure());
    Ok(())
}
