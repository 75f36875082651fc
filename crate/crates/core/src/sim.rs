//! Circuit execution on the covariance carrier: product-state preparation,
//! gate-by-gate evolution, Born probabilities, and seeded sampling.
//!
//! # Sampling RNG
//!
//! Shot `t` draws its uniforms from `ChaCha8Rng::seed_from_u64(seed)` with
//! stream `t`, one `f64` per measured bit. Shots are therefore independent of
//! how they are partitioned, and [`sample_par`] returns exactly what
//! [`sample`] returns.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{check_index_set, AntisymMat};
use crate::state::{from_diagonal, DGaussState, DiagonalSpec};
use crate::unitary::{Axis, Gate};

/// Determinants in `[−DET_CLAMP, 0)` are read as 0.
pub const DET_CLAMP: f64 = 1e-10;
/// Bloch vectors may exceed unit length by this much.
pub const BLOCH_TOL: f64 = 1e-9;

/// Outcome `x` on lines `K` (1-based, increasing); `true` is outcome 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementOp {
    lines: Vec<usize>,
    x: Vec<bool>,
}

impl MeasurementOp {
    pub fn new(lines: Vec<usize>, x: Vec<bool>) -> Result<Self> {
        if lines.len() != x.len() {
            return Err(Error::Dimension(format!("{} lines but {} outcome bits", lines.len(), x.len())));
        }
        check_index_set(&lines, usize::MAX)?;
        Ok(Self { lines, x })
    }

    pub fn lines(&self) -> &[usize] {
        &self.lines
    }

    pub fn outcome(&self) -> &[bool] {
        &self.x
    }

    fn check_n(&self, n: usize) -> Result<()> {
        check_index_set(&self.lines, n)
    }
}

/// Real carrier of `Σ(K,x)`: for each measured line `q` with outcome sign
/// `s = (−1)^{x}`, entries `[2q−1, 2q] = −s` and `[2q, 2q−1] = s`.
pub fn measurement_cov(n: usize, m: &MeasurementOp) -> Result<AntisymMat<f64>> {
    m.check_n(n)?;
    let mut c = DMatrix::zeros(2 * n, 2 * n);
    for (&q, &b) in m.lines.iter().zip(&m.x) {
        let s = if b { -1.0 } else { 1.0 };
        c[(2 * q - 2, 2 * q - 1)] = -s;
        c[(2 * q - 1, 2 * q - 2)] = s;
    }
    AntisymMat::new(c)
}

/// `Tr[O(K,x)ρ] = 2^{−k} sqrt(det(I − M_ρ M_{K,x}))`.
///
/// `M_{K,x}` vanishes outside the `2k` measured Majorana axes, so the
/// determinant reduces exactly to the `2k×2k` block on those axes.
pub fn expectation(s: &DGaussState, m: &MeasurementOp) -> Result<f64> {
    m.check_n(s.n())?;
    let k = m.lines.len();
    let axes: Vec<usize> = m.lines.iter().flat_map(|&q| [2 * q - 2, 2 * q - 1]).collect();
    let ext = s.extended();
    let mut a = DMatrix::<f64>::identity(2 * k, 2 * k);
    // (M_ρ M_K)_{ab} over measured axes; M_K has ±s in the paired slot only.
    for (ra, &p) in axes.iter().enumerate() {
        for (jb, &b) in m.x.iter().enumerate() {
            let s = if b { -1.0 } else { 1.0 };
            let (c0, c1) = (axes[2 * jb], axes[2 * jb + 1]);
            // column 2jb of M_K has entry +s at row c1; column 2jb+1 has −s at row c0.
            a[(ra, 2 * jb)] -= ext[(p, c1)] * s;
            a[(ra, 2 * jb + 1)] += ext[(p, c0)] * s;
        }
    }
    finish_probability(a.determinant(), k)
}

/// [`expectation`] through the full `2n×2n` determinant. Kept as a reference.
pub fn expectation_full(s: &DGaussState, m: &MeasurementOp) -> Result<f64> {
    let mk = measurement_cov(s.n(), m)?;
    let d = 2 * s.n();
    let det = (DMatrix::<f64>::identity(d, d) - s.m() * mk.matrix()).determinant();
    finish_probability(det, m.lines.len())
}

fn finish_probability(det: f64, k: usize) -> Result<f64> {
    if det < -DET_CLAMP {
        return Err(Error::Numerical(format!("measurement determinant {det:e} is negative")));
    }
    Ok((det.max(0.0).sqrt() * 0.5f64.powi(k as i32)).min(1.0))
}

/// `Tr(ρσ) = 2^{−n} sqrt(det(I − M_ρ M_σ))` for even `σ`.
pub fn overlap(rho: &DGaussState, sigma: &DGaussState) -> Result<f64> {
    if rho.n() != sigma.n() {
        return Err(Error::Dimension("overlap of states of different size".into()));
    }
    if !sigma.is_even(1e-12) {
        return Err(Error::Precondition("overlap formula needs an even second argument".into()));
    }
    let d = 2 * rho.n();
    let det = (DMatrix::<f64>::identity(d, d) - rho.m() * sigma.m()).determinant();
    if det < -DET_CLAMP {
        return Err(Error::Numerical(format!("overlap determinant {det:e} is negative")));
    }
    Ok(det.max(0.0).sqrt() * 0.5f64.powi(rho.n() as i32))
}

/// Whether `⊗_j (I + r_j·σ)/2` is a displaced Gaussian state: every line
/// with a transverse Bloch component must be preceded only by pure lines.
pub fn is_gaussian_product(blochs: &[[f64; 3]]) -> bool {
    let mut all_pure = true;
    for r in blochs {
        let transverse = r[0].hypot(r[1]) > 0.0;
        if transverse && !all_pure {
            return false;
        }
        all_pure &= norm3(r) >= 1.0 - BLOCH_TOL;
    }
    true
}

fn norm3(r: &[f64; 3]) -> f64 {
    (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt()
}

/// Prepares `⊗_j (I + r_j·σ)/2` by synthesizing each factor on line 1 from a
/// diagonal state and fermionic-swapping it into place, last line first.
///
/// Pure products are always Gaussian. Mixed factors are supported when they
/// are diagonal or when every earlier line is pure (see
/// [`is_gaussian_product`]); other products are not Gaussian and are
/// rejected.
pub fn prepare_product(blochs: &[[f64; 3]]) -> Result<DGaussState> {
    for r in blochs {
        if !r.iter().all(|x| x.is_finite()) || norm3(r) > 1.0 + BLOCH_TOL {
            return Err(Error::Inadmissible(format!("Bloch vector {r:?} is longer than 1")));
        }
    }
    if !is_gaussian_product(blochs) {
        return Err(Error::Precondition(
            "mixed line before a line with transverse Bloch component: product is not Gaussian".into(),
        ));
    }
    let n = blochs.len();
    let lambdas = (0..n).map(|j| norm3(&blochs[n - 1 - j]).min(1.0)).collect();
    let mut s = from_diagonal(&DiagonalSpec::new(lambdas)?);
    let mut gates = Vec::new();
    for q in (1..=n).rev() {
        let r = &blochs[q - 1];
        let len = norm3(r);
        if len > 0.0 {
            let theta = r[0].hypot(r[1]).atan2(r[2]);
            let phi = r[1].atan2(r[0]);
            gates.push(Gate::Line1 { axis: Axis::Y, angle: theta });
            gates.push(Gate::Line1 { axis: Axis::Z, angle: phi });
        }
        gates.extend((1..q).map(|line| Gate::Fswap { line }));
    }
    apply_gates(&mut s, &gates)?;
    Ok(s)
}

/// Folds gates into a state in place, O(n) per gate.
pub fn apply_gates(s: &mut DGaussState, gates: &[Gate]) -> Result<()> {
    let n = s.n();
    gates.iter().try_for_each(|g| g.validate(n))?;
    let ext = s.extended_mut();
    for g in gates {
        g.conjugate_extended(n, ext);
    }
    Ok(())
}

/// Initial state of a circuit.
#[derive(Clone, Debug, PartialEq)]
pub enum InputState {
    Diagonal(DiagonalSpec),
    Product(Vec<[f64; 3]>),
    Covariance(DGaussState),
}

impl InputState {
    pub fn n(&self) -> usize {
        match self {
            InputState::Diagonal(d) => d.lambdas().len(),
            InputState::Product(b) => b.len(),
            InputState::Covariance(s) => s.n(),
        }
    }

    pub fn prepare(&self) -> Result<DGaussState> {
        match self {
            InputState::Diagonal(d) => Ok(from_diagonal(d)),
            InputState::Product(b) => prepare_product(b),
            InputState::Covariance(s) => Ok(s.clone()),
        }
    }
}

/// What to do with the final state.
#[derive(Clone, Debug, PartialEq)]
pub enum Measurement {
    Expectation(MeasurementOp),
    Sample { lines: Vec<usize>, shots: usize, seed: u64 },
}

/// Input state, gates, and measurement on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n: usize,
    pub input: InputState,
    pub gates: Vec<Gate>,
    pub measurement: Measurement,
}

impl Circuit {
    pub fn validate(&self) -> Result<()> {
        if self.input.n() != self.n {
            return Err(Error::Dimension(format!("input has {} lines, circuit has {}", self.input.n(), self.n)));
        }
        self.gates.iter().try_for_each(|g| g.validate(self.n))?;
        match &self.measurement {
            Measurement::Expectation(m) => m.check_n(self.n),
            Measurement::Sample { lines, shots, .. } => {
                if *shots == 0 {
                    return Err(Error::Precondition("shots must be at least 1".into()));
                }
                check_index_set(lines, self.n)
            }
        }
    }
}

/// Final state of a circuit, cost O(g·n) for `g` gates after preparation.
pub fn run(c: &Circuit) -> Result<DGaussState> {
    c.validate()?;
    let mut s = c.input.prepare()?;
    apply_gates(&mut s, &c.gates)?;
    Ok(s)
}

/// Chain-rule sampler with memoized prefix probabilities.
struct Sampler<'a> {
    state: &'a DGaussState,
    lines: &'a [usize],
    joint: HashMap<Vec<bool>, f64>,
}

impl<'a> Sampler<'a> {
    fn new(state: &'a DGaussState, lines: &'a [usize]) -> Self {
        Self { state, lines, joint: HashMap::new() }
    }

    fn prob(&mut self, prefix: &[bool]) -> Result<f64> {
        if let Some(&p) = self.joint.get(prefix) {
            return Ok(p);
        }
        let m = MeasurementOp { lines: self.lines[..prefix.len()].to_vec(), x: prefix.to_vec() };
        let p = expectation(self.state, &m)?;
        self.joint.insert(prefix.to_vec(), p);
        Ok(p)
    }

    fn shot(&mut self, seed: u64, index: u64) -> Result<Vec<bool>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let mut bits = vec![false; self.lines.len()];
        let mut p_prev = 1.0;
        for i in 0..bits.len() {
            let u: f64 = rng.gen();
            let p0 = self.prob(&bits[..=i])?;
            let bit = if p_prev <= 1e-300 {
                false
            } else {
                let cond = p0 / p_prev;
                if !(-1e-9..=1.0 + 1e-9).contains(&cond) {
                    return Err(Error::Numerical(format!("conditional probability {cond} out of range")));
                }
                u >= cond
            };
            if bit {
                bits[i] = true;
                p_prev = (p_prev - p0).max(0.0);
            } else {
                p_prev = p0;
            }
        }
        Ok(bits)
    }
}

/// Draws `shots` outcomes on `lines` bit by bit, each conditional taken as
/// the ratio of consecutive joint probabilities.
pub fn sample(s: &DGaussState, lines: &[usize], shots: usize, seed: u64) -> Result<Vec<Vec<bool>>> {
    check_index_set(lines, s.n())?;
    let mut sampler = Sampler::new(s, lines);
    (0..shots as u64).map(|t| sampler.shot(seed, t)).collect()
}

/// [`sample`] spread over threads; output is identical to the sequential one.
pub fn sample_par(s: &DGaussState, lines: &[usize], shots: usize, seed: u64) -> Result<Vec<Vec<bool>>> {
    check_index_set(lines, s.n())?;
    (0..shots as u64)
        .into_par_iter()
        .map_init(|| Sampler::new(s, lines), |sampler, t| sampler.shot(seed, t))
        .collect()
}

/// Formats an outcome as a string of `0` and `1`.
pub fn bitstring(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Parses a string of `0` and `1`.
pub fn parse_bitstring(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Precondition(format!("bitstring {s:?} contains {c:?}"))),
        })
        .collect()
}
