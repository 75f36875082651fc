//! Displaced Gaussian unitaries `U = exp(½γᵀhγ + i dᵀγ)` and their rotations
//! `R = exp(2·[[h, −d], [dᵀ, 0]]) ∈ SO(2n+1)`, which act on states as
//! `Σ̃ ↦ R Σ̃ Rᵀ`.
//!
//! Gate conventions, with `s_jk = e_j e_kᵀ − e_k e_jᵀ`:
//!
//! | gate | unitary | rotation |
//! |------|---------|----------|
//! | `Matchgate { axes: [j, k], angle: θ }` | `exp((θ/2) γ_jγ_k)` | `exp(θ s_jk)` |
//! | `Line1 { axis: X, angle: θ }` | `exp(−iθX₁/2)` | `exp(θ s_{1,2n+1})` |
//! | `Line1 { axis: Y, angle: θ }` | `exp(−iθY₁/2)` | `exp(θ s_{2,2n+1})` |
//! | `Line1 { axis: Z, angle: θ }` | `exp(−iθZ₁/2)` | `exp(−θ s_{12})` |
//! | `Fswap { line: a }` | fermionic swap of lines `a, a+1` | `(2a−1, 2a) ↔ (2a+1, 2a+2)` |

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dense::{self, DenseOp};
use crate::error::{Error, Result};
use crate::linalg::{
    expm_antisym, logm_rotation, multiply_planes, normalize_angle, plane_decompose, AntisymMat, PlaneRotation,
    Rotation,
};
use crate::state::DGaussState;

/// `2·[[h, −d], [dᵀ, 0]]`.
pub fn lie_embed(h: &AntisymMat<f64>, d: &[f64]) -> Result<AntisymMat<f64>> {
    let dim = h.dim();
    if dim % 2 == 1 || d.len() != dim {
        return Err(Error::Dimension(format!("generator must be 2n×2n with a 2n-vector, got {dim} and {}", d.len())));
    }
    let mut g = DMatrix::zeros(dim + 1, dim + 1);
    g.view_mut((0, 0), (dim, dim)).copy_from(&(h.matrix() * 2.0));
    for (j, &v) in d.iter().enumerate() {
        g[(j, dim)] = -2.0 * v;
        g[(dim, j)] = 2.0 * v;
    }
    Ok(AntisymMat::from_raw(g))
}

/// Inverse of [`lie_embed`].
pub fn lie_extract(g: &AntisymMat<f64>) -> (AntisymMat<f64>, Vec<f64>) {
    let dim = g.dim() - 1;
    let m = g.matrix();
    let h = m.view((0, 0), (dim, dim)) * 0.5;
    let d = (0..dim).map(|j| -0.5 * m[(j, dim)]).collect();
    (AntisymMat::from_raw(h), d)
}

/// A displaced Gaussian unitary, kept as its rotation and, when known, its
/// generator.
#[derive(Clone, Debug, PartialEq)]
pub struct DGUnitary {
    n: usize,
    generator: Option<(AntisymMat<f64>, Vec<f64>)>,
    rotation: Rotation,
}

impl DGUnitary {
    pub fn new(h: AntisymMat<f64>, d: Vec<f64>) -> Result<Self> {
        let rotation = expm_antisym(&lie_embed(&h, &d)?);
        Ok(Self { n: h.dim() / 2, generator: Some((h, d)), rotation })
    }

    pub fn from_rotation(r: Rotation) -> Result<Self> {
        if r.dim().is_multiple_of(2) {
            return Err(Error::Dimension(format!("rotation must act on 2n+1 axes, got {}", r.dim())));
        }
        Ok(Self { n: r.dim() / 2, generator: None, rotation: r })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            generator: Some((AntisymMat::zeros(2 * n), vec![0.0; 2 * n])),
            rotation: Rotation::identity(2 * n + 1),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rotation(&self) -> &Rotation {
        &self.rotation
    }

    /// `(h, d)`, taken from construction or recovered by the principal
    /// matrix logarithm of the rotation.
    pub fn generator(&self) -> Result<(AntisymMat<f64>, Vec<f64>)> {
        match &self.generator {
            Some(g) => Ok(g.clone()),
            None => Ok(lie_extract(&logm_rotation(&self.rotation)?)),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            generator: self.generator.as_ref().map(|(h, d)| {
                (AntisymMat::from_raw(-h.matrix()), d.iter().map(|x| -x).collect())
            }),
            rotation: self.rotation.transpose(),
        }
    }

    /// Dense unitary from the generator. Defined up to a global phase when
    /// the generator had to be recovered by a logarithm.
    pub fn dense(&self) -> Result<DenseOp> {
        let (h, d) = self.generator()?;
        dense::exp_quadratic(self.n, &h, &d)
    }
}

/// `U₁U₂` as a rotation; its generator is recovered lazily.
pub fn compose(u1: &DGUnitary, u2: &DGUnitary) -> Result<DGUnitary> {
    if u1.n != u2.n {
        return Err(Error::Dimension(format!("composing n = {} with n = {}", u1.n, u2.n)));
    }
    DGUnitary::from_rotation(u1.rotation.compose(&u2.rotation))
}

/// `Σ̃ ↦ R Σ̃ Rᵀ`.
pub fn conjugate_state(u: &DGUnitary, s: &DGaussState) -> Result<DGaussState> {
    if u.n != s.n() {
        return Err(Error::Dimension(format!("unitary on n = {} applied to state on n = {}", u.n, s.n())));
    }
    let r = u.rotation.matrix();
    let out = r * s.extended() * r.transpose();
    Ok(DGaussState::from_extended_unchecked((&out - out.transpose()) * 0.5))
}

/// Coefficients of `U γ_J U† = Σ_K c_K γ_K` with
/// `c_K` a phase times the minor of `R` with rows `K̃`
/// and columns `J̃` (`J̃ = J ∪ {2n+1}` for odd `|J|`). The phase is `i` when
/// an odd `J` maps to an even `K`, `−i` in the reverse case, and 1 otherwise.
/// Fails when more than `budget` minors would be needed. Terms with
/// `|c_K| ≤ 1e−15` are dropped.
pub fn conjugate_monomial(u: &DGUnitary, idx: &[usize], budget: usize) -> Result<BTreeMap<Vec<usize>, Complex64>> {
    let dim = 2 * u.n + 1;
    crate::linalg::check_index_set(idx, dim - 1)?;
    let mut cols: Vec<usize> = idx.to_vec();
    if cols.len() % 2 == 1 {
        cols.push(dim);
    }
    let k = cols.len();
    let needed = binomial(dim, k);
    if needed > budget as u128 {
        return Err(Error::Precondition(format!("{needed} minors exceed the budget of {budget}")));
    }
    let r = u.rotation.matrix();
    let mut out = BTreeMap::new();
    let mut rows: Vec<usize> = (1..=k).collect();
    loop {
        let sub = DMatrix::from_fn(k, k, |a, b| r[(rows[a] - 1, cols[b] - 1)]);
        let c = if k == 0 { 1.0 } else { sub.determinant() };
        if c.abs() > 1e-15 {
            let key: Vec<usize> = rows.iter().copied().filter(|&x| x != dim).collect();
            let phase = match (idx.len() % 2, key.len() % 2) {
                (1, 0) => Complex64::new(0.0, 1.0),
                (0, 1) => Complex64::new(0.0, -1.0),
                _ => Complex64::new(1.0, 0.0),
            };
            out.insert(key, phase * c);
        }
        if !next_combination(&mut rows, dim) {
            break;
        }
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Advances a sorted 1-based combination of `{1..=n}`; false when exhausted.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - (k - 1 - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Single-qubit rotation axis on line 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Elementary gates of the simulable alphabet. Labels are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Gate {
    /// Plane rotation between two Majorana axes on one line or two adjacent lines.
    Matchgate { axes: [usize; 2], angle: f64 },
    /// `exp(−iθP/2)` on line 1.
    Line1 { axis: Axis, angle: f64 },
    /// Fermionic swap of lines `line` and `line + 1`.
    Fswap { line: usize },
}

impl Gate {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Gate::Matchgate { axes: [j, k], angle } => {
                if j == k || j == 0 || k == 0 || j > 2 * n || k > 2 * n {
                    return Err(Error::Index(format!("matchgate axes ({j}, {k}) invalid for n = {n}")));
                }
                if j.div_ceil(2) > k.div_ceil(2) + 1 || k.div_ceil(2) > j.div_ceil(2) + 1 {
                    return Err(Error::Index(format!("matchgate axes ({j}, {k}) span non-adjacent lines")));
                }
                finite(angle)
            }
            Gate::Line1 { angle, .. } => {
                if n == 0 {
                    return Err(Error::Index("line-1 gate on an empty register".into()));
                }
                finite(angle)
            }
            Gate::Fswap { line } => {
                if line == 0 || line >= n {
                    return Err(Error::Index(format!("fswap line {line} invalid for n = {n}")));
                }
                Ok(())
            }
        }
    }

    /// The plane rotation this gate induces, if it is one.
    pub fn plane(&self, n: usize) -> Option<PlaneRotation> {
        let last = 2 * n + 1;
        match *self {
            Gate::Matchgate { axes: [j, k], angle } => Some(PlaneRotation { j, k, angle }),
            Gate::Line1 { axis: Axis::X, angle } => Some(PlaneRotation { j: 1, k: last, angle }),
            Gate::Line1 { axis: Axis::Y, angle } => Some(PlaneRotation { j: 2, k: last, angle }),
            Gate::Line1 { axis: Axis::Z, angle } => Some(PlaneRotation { j: 1, k: 2, angle: -angle }),
            Gate::Fswap { .. } => None,
        }
    }

    /// Applies `X ← G X Gᵀ` on a `(2n+1)`-dimensional carrier in O(n).
    pub fn conjugate_extended(&self, n: usize, x: &mut DMatrix<f64>) {
        match (self.plane(n), *self) {
            (Some(p), _) => p.conjugate(x),
            (None, Gate::Fswap { line: a }) => {
                for (p, q) in [(2 * a - 2, 2 * a), (2 * a - 1, 2 * a + 1)] {
                    x.swap_rows(p, q);
                    x.swap_columns(p, q);
                }
            }
            (None, _) => unreachable!("only fswap lacks a plane"),
        }
    }

    /// Dense unitary on `n` qubits.
    pub fn dense(&self, n: usize) -> Result<DenseOp> {
        self.validate(n)?;
        let half = |t: f64| (0.5 * t).sin_cos();
        match *self {
            Gate::Matchgate { axes: [j, k], angle } => {
                let (s, c) = half(angle);
                let pair = if j < k {
                    dense::majorana_monomial(n, &[j, k])?
                } else {
                    dense::majorana_monomial(n, &[k, j])?.scale(Complex64::new(-1.0, 0.0))
                };
                let id = DenseOp::identity(n);
                DenseOp::new(n, id.matrix() * Complex64::new(c, 0.0) + pair.matrix() * Complex64::new(s, 0.0))
            }
            Gate::Line1 { axis, angle } => {
                let (s, c) = half(angle);
                let (c, ms) = (Complex64::new(c, 0.0), Complex64::new(0.0, -s));
                let z = Complex64::new(0.0, 0.0);
                let u = match axis {
                    Axis::X => [[c, ms], [ms, c]],
                    Axis::Y => [[c, Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), c]],
                    Axis::Z => [[c + ms, z], [z, c - ms]],
                };
                dense::single_qubit(n, 1, u)
            }
            Gate::Fswap { line } => dense::fswap(n, line, line + 1),
        }
    }
}

fn finite(angle: f64) -> Result<()> {
    if angle.is_finite() {
        Ok(())
    } else {
        Err(Error::Numerical(format!("gate angle {angle} is not finite")))
    }
}

/// The SO(2n+1) element effected by a gate.
pub fn gate_rotation(g: &Gate, n: usize) -> Result<Rotation> {
    g.validate(n)?;
    let mut x = DMatrix::identity(2 * n + 1, 2 * n + 1);
    match (g.plane(n), *g) {
        (Some(p), _) => p.apply_left(&mut x),
        (None, Gate::Fswap { line: a }) => {
            x.swap_rows(2 * a - 2, 2 * a);
            x.swap_rows(2 * a - 1, 2 * a + 1);
        }
        (None, _) => unreachable!("only fswap lacks a plane"),
    }
    Ok(Rotation::from_raw(x))
}

/// An ordered gate list on `n` qubits; gates apply first to last.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateSequence {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl GateSequence {
    pub fn validate(&self) -> Result<()> {
        self.gates.iter().try_for_each(|g| g.validate(self.n))
    }

    /// `R_last ⋯ R_first`.
    pub fn rotation(&self) -> Result<Rotation> {
        self.validate()?;
        let dim = 2 * self.n + 1;
        let mut x = DMatrix::identity(dim, dim);
        for g in &self.gates {
            match g.plane(self.n) {
                Some(p) => p.apply_left(&mut x),
                None => x = gate_rotation(g, self.n)?.matrix() * x,
            }
        }
        Ok(Rotation::from_raw(x))
    }

    /// Dense product `U_last ⋯ U_first`.
    pub fn dense(&self) -> Result<DenseOp> {
        let mut u = DenseOp::identity(self.n);
        for g in &self.gates {
            u = g.dense(self.n)?.mul(&u);
        }
        Ok(u)
    }
}

/// Whether `(a, b)`, `a < b`, is an axis pair the compiler routes through:
/// consecutive Majorana axes, plus `(1, 2n+1)` for line-1 X rotations.
fn compiler_edge(n: usize, a: usize, b: usize) -> bool {
    (b == a + 1 && b <= 2 * n) || (a == 1 && b == 2 * n + 1)
}

/// Compiles a rotation of dimension `2n+1` into the gate alphabet.
///
/// The allowed axis pairs form the path `2n+1, 1, 2, …, 2n`, so every
/// Givens step is itself a gate and no long-range routing is needed. The
/// count is at most `(2n+1)²`, i.e. `C = 9` in `count ≤ C·n³` for all `n ≥ 1`.
/// Rotations that fix axis `2n+1` compile without line-1 X or Y gates.
pub fn compile(r: &Rotation) -> Result<GateSequence> {
    let dim = r.dim();
    if dim.is_multiple_of(2) {
        return Err(Error::Dimension(format!("rotation must act on 2n+1 axes, got {dim}")));
    }
    let n = dim / 2;
    let planes = plane_decompose(r, |a, b| compiler_edge(n, a, b))?;
    let gates = planes
        .into_iter()
        .map(|p| {
            let p = p.ordered();
            if p.k == dim {
                Gate::Line1 { axis: Axis::X, angle: p.angle }
            } else {
                Gate::Matchgate { axes: [p.j, p.k], angle: normalize_angle(p.angle) }
            }
        })
        .collect();
    Ok(GateSequence { n, gates })
}

/// `max |R_gates − R|`.
pub fn compile_residual(seq: &GateSequence, r: &Rotation) -> Result<f64> {
    Ok((seq.rotation()?.matrix() - r.matrix()).amax())
}

/// Plane rotations of a sequence without fswaps, as used by the factorization
/// round-trip checks.
pub fn planes_of(seq: &GateSequence) -> Option<Vec<PlaneRotation>> {
    seq.gates.iter().map(|g| g.plane(seq.n)).collect()
}

/// Re-multiplies plane rotations of a fswap-free sequence.
pub fn multiply_sequence(seq: &GateSequence) -> Option<DMatrix<f64>> {
    planes_of(seq).map(|p| multiply_planes(&p, 2 * seq.n + 1))
}
