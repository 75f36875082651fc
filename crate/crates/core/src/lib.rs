//! Polynomial-time simulation of displaced fermionic Gaussian states and
//! circuits.
//!
//! States on `n` qubits are carried by a real antisymmetric `(2n+1)×(2n+1)`
//! matrix `M̃ = [[M, μ], [−μᵀ, 0]]`: `M` holds the quadratic Majorana
//! moments and `μ` the linear ones. Every higher moment is a Pfaffian of a
//! submatrix. Gaussian unitaries act as rotations `M̃ → R M̃ Rᵀ`, and
//! outcome probabilities of computational-basis measurements are
//! determinants. The modules:
//!
//! - [`linalg`]: antisymmetric matrices, Pfaffians, canonical forms, plane rotations.
//! - [`dense`]: an exact `2ⁿ×2ⁿ` reference used to cross-check everything else.
//! - [`state`]: admissible states, Wick moments, thermal states.
//! - [`unitary`]: Gaussian unitaries, the gate alphabet and the gate compiler.
//! - [`sim`]: circuits, exact probabilities and seeded sampling.
//! - [`embedding`]: the even embedding on one extra qubit and the Gaussianity tests.
//! - [`cli`]: the `dgsim` command-line front end.
//!
//! Qubit 1 is the leftmost tensor factor, `γ_{2j−1} = Z⋯Z X` and
//! `γ_{2j} = Z⋯Z Y` on line `j`, and `(I + λZ)/2` has `M[2j−1, 2j] = −λ`.
//!
//! ```
//! use dgsim::sim::{expectation, MeasurementOp};
//! use dgsim::state::{from_diagonal, DiagonalSpec};
//! use dgsim::unitary::{conjugate_state, Gate, GateSequence, DGUnitary};
//!
//! let seq = GateSequence { n: 2, gates: vec![Gate::Matchgate { axes: [2, 3], angle: 0.5 }] };
//! let u = DGUnitary::from_rotation(seq.rotation()?)?;
//! let s = conjugate_state(&u, &from_diagonal(&DiagonalSpec::new(vec![1.0, 1.0])?))?;
//! let p = expectation(&s, &MeasurementOp::new(vec![1, 2], vec![true, true])?)?;
//! assert!((p - 0.25f64.sin().powi(2)).abs() < 1e-12);
//! # Ok::<(), dgsim::error::Error>(())
//! ```

pub mod cli;
pub mod dense;
pub mod embedding;
pub mod error;
pub mod linalg;
pub mod sim;
pub mod state;
pub mod unitary;
