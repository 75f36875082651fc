//! The even embedding `E(ρ) = V(ρ ⊗ |+⟩⟨+|)V†` with `V = exp(−i(π/4)γ_{2n+2})`,
//! its covariance-level form, the matching unitary embedding, and the
//! convolution-based Gaussianity tests.
//!
//! The covariance formula for `E(ρ)` holds for pure displaced Gaussian `ρ`.
//! For mixed `ρ` the embedded state is generally not Gaussian, so
//! [`embed_state`] rejects mixed input.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dense::{self, check_cap, DenseOp, PAIRED_REGISTER_CAP};
use crate::error::{Error, Result};
use crate::linalg::{block_diagonalize, AntisymMat};
use crate::state::DGaussState;
use crate::unitary::DGUnitary;

/// Overlap threshold of the state test.
pub const STATE_TEST_TOL: f64 = 1e-7;
/// Wick-consistency threshold of the unitary test.
pub const WICK_TOL: f64 = 1e-7;

/// Embedded state together with the last row `(rᵀ, c)` of the rotation that
/// brought `M̃(ρ)` to canonical form.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingResult {
    pub state: DGaussState,
    pub r: DVector<f64>,
    pub c: f64,
}

/// Covariance of `E(ρ)` on `n+1` qubits:
/// `M_E = [[M, −r, μ], [rᵀ, 0, c], [−μᵀ, −c, 0]]`.
pub fn embed_state(s: &DGaussState) -> Result<EmbeddingResult> {
    if !s.is_pure() {
        return Err(Error::Precondition(
            "the embedding preserves Gaussianity only for pure states".into(),
        ));
    }
    let n = s.n();
    let d = 2 * n;
    let (rot, _) = block_diagonalize(&AntisymMat::from_raw(s.extended().clone()));
    // block_diagonalize orients blocks as +λ at [2j−1, 2j]; the carrier
    // convention puts −λ there. Swapping each of the n pairs at fixed det
    // flips the null row by (−1)^n.
    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
    let last = rot.matrix().row(d).transpose() * sign;
    let r = last.rows(0, d).into_owned();
    let c = last[d];
    let mu = s.mu();
    let mut e = DMatrix::zeros(d + 3, d + 3);
    e.view_mut((0, 0), (d, d)).copy_from(&s.m());
    for j in 0..d {
        e[(j, d)] = -r[j];
        e[(d, j)] = r[j];
        e[(j, d + 1)] = mu[j];
        e[(d + 1, j)] = -mu[j];
    }
    e[(d, d + 1)] = c;
    e[(d + 1, d)] = -c;
    Ok(EmbeddingResult { state: DGaussState::from_extended_unchecked(e), r, c })
}

/// `h̃ = [[h, 0, −d], [0, 0, 0], [dᵀ, 0, 0]]` on `n+1` qubits, the generator
/// of `V(U ⊗ I)V†`.
pub fn embedded_generator(h: &AntisymMat<f64>, d: &[f64]) -> Result<AntisymMat<f64>> {
    let dim = h.dim();
    if dim % 2 == 1 || d.len() != dim {
        return Err(Error::Dimension("generator must be 2n×2n with a 2n-vector".into()));
    }
    let mut g = DMatrix::zeros(dim + 2, dim + 2);
    g.view_mut((0, 0), (dim, dim)).copy_from(h.matrix());
    for (j, &v) in d.iter().enumerate() {
        g[(j, dim + 1)] = -v;
        g[(dim + 1, j)] = v;
    }
    Ok(AntisymMat::from_raw(g))
}

/// Even Gaussian unitary `Ũ = V(U ⊗ I)V†`.
pub fn embed_unitary(u: &DGUnitary) -> Result<DGUnitary> {
    let (h, d) = u.generator()?;
    let g = embedded_generator(&h, &d)?;
    DGUnitary::new(g, vec![0.0; 2 * u.n() + 2])
}

/// Clifford gates used by the decomposition of `V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    /// `A = S†H`: H first, then S†.
    A(usize),
    /// `A† = HS`: S first, then H.
    ADag(usize),
    Cx { control: usize, target: usize },
}

impl CliffordGate {
    pub fn dense(&self, n: usize) -> Result<DenseOp> {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match *self {
            CliffordGate::H(q) => dense::single_qubit(n, q, [[h, h], [h, -h]]),
            CliffordGate::S(q) => dense::single_qubit(n, q, [[one, z], [z, Complex64::new(0.0, 1.0)]]),
            CliffordGate::Sdg(q) => dense::single_qubit(n, q, [[one, z], [z, Complex64::new(0.0, -1.0)]]),
            CliffordGate::A(q) => Ok(CliffordGate::Sdg(q).dense(n)?.mul(&CliffordGate::H(q).dense(n)?)),
            CliffordGate::ADag(q) => Ok(CliffordGate::H(q).dense(n)?.mul(&CliffordGate::S(q).dense(n)?)),
            CliffordGate::Cx { control, target } => dense::cx(n, control, target),
        }
    }
}

/// Gates whose product equals `V` up to phase, in application order:
/// `A†` on line n+1, CX from each of lines 1..n onto n+1, `S†` on n+1, the
/// same CX fan-in, then `A` on n+1. The middle phase gate is `S†`; with `S`
/// the product is `V†`.
pub fn embed_v_gates(n: usize) -> Vec<CliffordGate> {
    let a = n + 1;
    let fan_in = (1..=n).map(|control| CliffordGate::Cx { control, target: a });
    let mut g = vec![CliffordGate::ADag(a)];
    g.extend(fan_in.clone());
    g.push(CliffordGate::Sdg(a));
    g.extend(fan_in);
    g.push(CliffordGate::A(a));
    g
}

/// Dense product of Clifford gates in application order.
pub fn clifford_product(gates: &[CliffordGate], n: usize) -> Result<DenseOp> {
    let mut u = DenseOp::identity(n);
    for g in gates {
        u = g.dense(n)?.mul(&u);
    }
    Ok(u)
}

/// Dense `E(ρ) = V(ρ ⊗ |+⟩⟨+|)V†`.
pub fn embed_dense(rho: &DenseOp) -> Result<DenseOp> {
    let plus = DenseOp::new(1, DMatrix::from_element(2, 2, Complex64::new(0.5, 0.0)))?;
    Ok(rho.tensor(&plus)?.conjugated_by(&dense::embed_v(rho.n())?))
}

/// Dense `V(U ⊗ I)V†`.
pub fn embed_unitary_dense(u: &DenseOp) -> Result<DenseOp> {
    let v = dense::embed_v(u.n())?;
    Ok(u.tensor(&DenseOp::identity(1))?.conjugated_by(&v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Gaussian,
    NonGaussian,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateTest {
    /// `Tr[ψ · (ψ ⊠ ψ)]`, equal to 1 exactly for Gaussian `ψ`.
    pub overlap: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryTest {
    /// Largest Wick deviation of the Choi state.
    pub deviation: f64,
    pub verdict: Verdict,
}

fn require_pure(psi: &DenseOp) -> Result<()> {
    psi.check_state()?;
    let p = psi.purity();
    if p < 1.0 - 1e-9 {
        return Err(Error::Precondition(format!("test needs a pure state, purity is {p}")));
    }
    Ok(())
}

/// Convolution test for even pure states: Gaussian iff `ψ ⊠ ψ = ψ`.
pub fn gaussian_state_test(psi: &DenseOp) -> Result<StateTest> {
    check_cap(psi.n(), PAIRED_REGISTER_CAP, "gaussian_state_test")?;
    require_pure(psi)?;
    if !psi.is_even(1e-10) {
        return Err(Error::Precondition("state test needs an even state".into()));
    }
    let conv = dense::fermionic_convolution(psi, psi)?;
    let overlap = psi.trace_product(&conv).re;
    let verdict = if overlap >= 1.0 - STATE_TEST_TOL { Verdict::Gaussian } else { Verdict::NonGaussian };
    Ok(StateTest { overlap, verdict })
}

/// Choi state `(U ⊗ I) ρ_E (U ⊗ I)†` on `2n` qubits.
pub fn choi_state(u: &DenseOp) -> Result<DenseOp> {
    let e = dense::max_entangled(u.n())?;
    let big = u.tensor(&DenseOp::identity(u.n()))?;
    Ok(e.conjugated_by(&big))
}

/// Choi-state test for even unitaries. Unitaries that break parity cannot be
/// even Gaussian and are reported as such.
pub fn gaussian_unitary_test(u: &DenseOp) -> Result<UnitaryTest> {
    check_cap(u.n(), PAIRED_REGISTER_CAP, "gaussian_unitary_test")?;
    let err = u.unitarity_error();
    if err > 1e-9 {
        return Err(Error::Precondition(format!("input is not unitary (error {err:e})")));
    }
    let parity = u.parity_violation();
    if parity > 1e-10 {
        return Ok(UnitaryTest { deviation: parity, verdict: Verdict::NonGaussian });
    }
    let deviation = dense::wick_deviation(&choi_state(u)?);
    let verdict = if deviation < WICK_TOL { Verdict::Gaussian } else { Verdict::NonGaussian };
    Ok(UnitaryTest { deviation, verdict })
}

/// Runs the even state test on `E(ρ)` for a pure state `ρ`.
pub fn displaced_state_test(rho: &DenseOp) -> Result<StateTest> {
    check_cap(rho.n() + 1, PAIRED_REGISTER_CAP, "displaced_state_test")?;
    require_pure(rho)?;
    gaussian_state_test(&embed_dense(rho)?)
}

/// Runs the even unitary test on `V(U ⊗ I)V†`.
pub fn displaced_unitary_test(u: &DenseOp) -> Result<UnitaryTest> {
    check_cap(u.n() + 1, PAIRED_REGISTER_CAP, "displaced_unitary_test")?;
    gaussian_unitary_test(&embed_unitary_dense(u)?)
}
