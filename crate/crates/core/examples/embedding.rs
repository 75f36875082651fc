//! Embeds a pure displaced state into an even state on one more qubit, and
//! checks the Clifford circuit that implements the embedding unitary.

use dgsim::dense;
use dgsim::embedding::{clifford_product, embed_dense, embed_state, embed_unitary, embed_v_gates};
use dgsim::state::{from_diagonal, DiagonalSpec};
use dgsim::unitary::{conjugate_state, Axis, Gate, GateSequence};

fn main() -> dgsim::error::Result<()> {
    let seq = GateSequence {
        n: 2,
        gates: vec![Gate::Line1 { axis: Axis::X, angle: 0.9 }, Gate::Matchgate { axes: [2, 3], angle: 0.5 }],
    };
    let u = dgsim::unitary::DGUnitary::from_rotation(seq.rotation()?)?;
    let s = conjugate_state(&u, &from_diagonal(&DiagonalSpec::new(vec![1.0, -1.0])?))?;
    println!("input is even: {}", s.is_even(1e-12));

    let e = embed_state(&s)?;
    println!("embedded state on {} qubits is even: {}, purity {:.12}", e.state.n(), e.state.is_even(1e-12), e.state.purity());
    println!("r = {:.6}, c = {:.6}", e.r.transpose(), e.c);
    let oracle = dense::real_extended_covariance(&embed_dense(&s.dense()?)?);
    println!("formula vs dense: {:.2e}", (e.state.extended() - oracle).amax());

    let ut = embed_unitary(&u)?;
    let compat = conjugate_state(&ut, &e.state)?;
    println!("Ũ E(ρ) Ũ† is even: {}", compat.is_even(1e-12));

    for n in 1..=3 {
        let gates = embed_v_gates(n);
        let dist = clifford_product(&gates, n + 1)?.projective_distance(&dense::embed_v(n)?);
        println!("n = {n}: {} Clifford gates, distance to V {dist:.1e}", gates.len());
    }
    Ok(())
}
