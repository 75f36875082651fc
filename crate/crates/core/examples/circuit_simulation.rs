//! Runs a small circuit on the covariance path: exact outcome probability and
//! seeded shot sampling.

use std::collections::BTreeMap;

use dgsim::sim::{self, Circuit, InputState, Measurement, MeasurementOp};
use dgsim::state::DiagonalSpec;
use dgsim::unitary::{Axis, Gate};

fn main() -> dgsim::error::Result<()> {
    let gates = vec![
        Gate::Line1 { axis: Axis::Y, angle: 1.1 },
        Gate::Matchgate { axes: [2, 3], angle: 0.7 },
        Gate::Fswap { line: 2 },
        Gate::Matchgate { axes: [4, 6], angle: -0.4 },
        Gate::Line1 { axis: Axis::X, angle: 0.3 },
    ];
    let c = Circuit {
        n: 3,
        input: InputState::Diagonal(DiagonalSpec::new(vec![1.0, 1.0, 0.8])?),
        gates,
        measurement: Measurement::Expectation(MeasurementOp::new(vec![1, 3], vec![true, false])?),
    };
    let s = sim::run(&c)?;
    let Measurement::Expectation(m) = &c.measurement else { unreachable!() };
    println!("P(x1 = 1, x3 = 0) = {:.12}", sim::expectation(&s, m)?);

    let mut counts = BTreeMap::new();
    for shot in sim::sample_par(&s, &[1, 2, 3], 20_000, 42)? {
        *counts.entry(sim::bitstring(&shot)).or_insert(0) += 1;
    }
    for (x, k) in counts {
        let bits = sim::parse_bitstring(&x)?;
        let p = sim::expectation(&s, &MeasurementOp::new(vec![1, 2, 3], bits)?)?;
        println!("{x}: {k:>5} shots, exact {p:.4}");
    }
    Ok(())
}
