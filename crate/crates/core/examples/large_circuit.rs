//! 10 000 random gates on 500 qubits, then a 10-line measurement.

use std::time::Instant;

use dgsim::sim::{self, MeasurementOp};
use dgsim::state::{from_diagonal, DiagonalSpec};
use dgsim::unitary::{Axis, Gate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> dgsim::error::Result<()> {
    let n = 500;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let gates: Vec<Gate> = (0..10_000)
        .map(|_| {
            let angle = rng.gen_range(-3.0..3.0);
            let line = rng.gen_range(1..n);
            match rng.gen_range(0..8) {
                0 => Gate::Line1 { axis: Axis::Y, angle },
                1 => Gate::Fswap { line },
                _ => Gate::Matchgate { axes: [2 * line, 2 * line + 1], angle },
            }
        })
        .collect();
    let start = Instant::now();
    let mut s = from_diagonal(&DiagonalSpec::new(vec![1.0; n])?);
    sim::apply_gates(&mut s, &gates)?;
    let lines: Vec<usize> = (1..=10).map(|k| 50 * k).collect();
    let p = sim::expectation(&s, &MeasurementOp::new(lines.clone(), vec![false; 10])?)?;
    let shots = sim::sample_par(&s, &lines, 100, 7)?;
    println!("P(all zero) = {p:.6e}");
    println!("first shot {}", sim::bitstring(&shots[0]));
    println!("{:.3} s for {} gates on {n} qubits", start.elapsed().as_secs_f64(), gates.len());
    Ok(())
}
