//! Displaced Gaussian states stored through their extended covariance.
//!
//! The carrier is the real antisymmetric `(2n+1)×(2n+1)` matrix
//! `M̃ = [[M, μ], [−μᵀ, 0]]` with `Σ = iM`, `Σ̃ = iM̃`. Moments follow
//! `ρ_J = Tr(γ_J† ρ)`, so `M_{jk} = −i·ρ_{(j,k)}` and `μ_j = Tr(γ_j ρ)`.
//! Under this convention the single-qubit state `(1+λZ)/2` on line `q` has
//! `M_{2q−1,2q} = −λ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dense::{self, check_cap, DenseOp, SINGLE_REGISTER_CAP};
use crate::error::{Error, Result};
use crate::linalg::{block_diagonalize, check_index_set, pfaffian_in_place, AntisymMat};

/// Admissibility slack on canonical values.
pub const ADMISSIBILITY_TOL: f64 = 1e-9;
/// Canonical values at or above `1 − PURE_TOL` count as pure modes.
pub const PURE_TOL: f64 = 1e-7;
/// Modes with `λ ≥ 1 − SATURATION_TOL` have no finite thermal generator.
pub const SATURATION_TOL: f64 = 1e-9;

/// A displaced Gaussian state on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DGaussState {
    n: usize,
    ext: DMatrix<f64>,
}

impl DGaussState {
    /// Builds a state from `M` (2n×2n) and `μ`, rejecting inadmissible input.
    pub fn new(m: &AntisymMat<f64>, mu: &[f64]) -> Result<Self> {
        let dim = m.dim();
        if dim % 2 == 1 || mu.len() != dim {
            return Err(Error::Dimension(format!(
                "covariance must be 2n×2n with a 2n-vector mean, got {dim}×{dim} and {}",
                mu.len()
            )));
        }
        let mut ext = DMatrix::zeros(dim + 1, dim + 1);
        ext.view_mut((0, 0), (dim, dim)).copy_from(m.matrix());
        for (j, &v) in mu.iter().enumerate() {
            ext[(j, dim)] = v;
            ext[(dim, j)] = -v;
        }
        Self::from_extended(&AntisymMat::from_raw(ext))
    }

    /// Builds a state from the real extended carrier `M̃`.
    pub fn from_extended(ext: &AntisymMat<f64>) -> Result<Self> {
        let dim = ext.dim();
        if dim.is_multiple_of(2) {
            return Err(Error::Dimension(format!("extended covariance must have odd size, got {dim}")));
        }
        let (_, lambdas) = block_diagonalize(ext);
        if let Some(l) = lambdas.iter().find(|l| l.abs() > 1.0 + ADMISSIBILITY_TOL) {
            return Err(Error::Inadmissible(format!("canonical value {l} exceeds 1")));
        }
        Ok(Self { n: dim / 2, ext: ext.matrix().clone() })
    }

    pub(crate) fn from_extended_unchecked(ext: DMatrix<f64>) -> Self {
        Self { n: ext.nrows() / 2, ext }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Real carrier `M̃`.
    pub fn extended(&self) -> &DMatrix<f64> {
        &self.ext
    }

    pub(crate) fn extended_mut(&mut self) -> &mut DMatrix<f64> {
        &mut self.ext
    }

    /// `M` with `Σ = iM`.
    pub fn m(&self) -> DMatrix<f64> {
        let d = 2 * self.n;
        self.ext.view((0, 0), (d, d)).into_owned()
    }

    /// Mean vector `μ_j = Tr(γ_j ρ)`.
    pub fn mu(&self) -> DVector<f64> {
        let d = 2 * self.n;
        self.ext.view((0, d), (d, 1)).column(0).into_owned()
    }

    /// `Σ̃ = iM̃`.
    pub fn sigma_tilde(&self) -> DMatrix<Complex64> {
        self.ext.map(|x| Complex64::new(0.0, x))
    }

    pub fn is_even(&self, tol: f64) -> bool {
        self.mu().amax() <= tol
    }

    /// Canonical values of `M̃`, descending.
    pub fn canonical_values(&self) -> Vec<f64> {
        block_diagonalize(&AntisymMat::from_raw(self.ext.clone())).1
    }

    /// `Tr ρ² = Π_j (1 + λ_j²)/2`.
    pub fn purity(&self) -> f64 {
        self.canonical_values().iter().map(|l| 0.5 * (1.0 + l * l)).product()
    }

    pub fn is_pure(&self) -> bool {
        self.canonical_values().iter().all(|l| l.abs() >= 1.0 - PURE_TOL)
    }

    /// `ρ_J = α_{|J|} Pf(Σ̃|J̃)` with `J̃ = J ∪ {2n+1}` for odd `|J|` and
    /// `α = (−i)^{|J| mod 2}`.
    pub fn wick_moment(&self, idx: &[usize]) -> Result<Complex64> {
        check_index_set(idx, 2 * self.n)?;
        let mut buf = Vec::with_capacity((idx.len() + 1).pow(2));
        Ok(wick_from_extended(&self.ext, idx, &mut buf))
    }

    /// Dense density operator assembled from all Wick moments.
    pub fn dense(&self) -> Result<DenseOp> {
        check_cap(self.n, SINGLE_REGISTER_CAP, "dense state")?;
        Ok(wick_dense(&self.ext))
    }
}

fn i_pow(k: usize) -> Complex64 {
    [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ][k % 4]
}

/// Wick moment from a real carrier `M̃`:
/// `(−i)^{|J| mod 2} · i^{|J̃|/2} · Pf(M̃|J̃)`.
fn wick_from_extended(ext: &DMatrix<f64>, idx: &[usize], buf: &mut Vec<f64>) -> Complex64 {
    let last = ext.nrows();
    let odd = idx.len() % 2 == 1;
    let k = idx.len() + usize::from(odd);
    let at = |a: usize| if a < idx.len() { idx[a] } else { last };
    buf.clear();
    for a in 0..k {
        for b in 0..k {
            buf.push(ext[(at(a) - 1, at(b) - 1)]);
        }
    }
    let pf = pfaffian_in_place(buf, k);
    let phase = i_pow(k / 2) * if odd { i_pow(3) } else { i_pow(0) };
    phase * pf
}

/// Dense operator `2^{−n} Σ_J ρ_J γ_J` from any real carrier, admissible or
/// not. Used to probe the admissibility boundary.
pub fn wick_dense(ext: &DMatrix<f64>) -> DenseOp {
    let n = ext.nrows() / 2;
    let mut values = Vec::with_capacity(1 << (2 * n));
    let mut buf = Vec::new();
    for mask in 0..1usize << (2 * n) {
        values.push(wick_from_extended(ext, &dense::indices_of(mask), &mut buf));
    }
    dense::table_from_values(n, values).reconstruct()
}

/// Diagonal product `⊗_j (1+λ_jZ)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalSpec {
    lambdas: Vec<f64>,
}

impl DiagonalSpec {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if let Some(l) = lambdas.iter().find(|l| l.is_nan() || l.abs() > 1.0) {
            return Err(Error::Inadmissible(format!("diagonal value {l} outside [-1, 1]")));
        }
        Ok(Self { lambdas })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

pub fn from_diagonal(spec: &DiagonalSpec) -> DGaussState {
    let n = spec.lambdas.len();
    let mut ext = DMatrix::zeros(2 * n + 1, 2 * n + 1);
    for (q, &l) in spec.lambdas.iter().enumerate() {
        ext[(2 * q, 2 * q + 1)] = -l;
        ext[(2 * q + 1, 2 * q)] = l;
    }
    DGaussState::from_extended_unchecked(ext)
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub valid: bool,
    pub pure: bool,
    /// Canonical values of `−iΣ̃`, descending.
    pub lambdas: Vec<f64>,
    /// Rank of `Σ̃` (reported, not enforced).
    pub rank: usize,
}

/// Checks a purely imaginary extended covariance for admissibility
/// (`λ_j ≤ 1 + 1e−9`) and purity (every `λ_j ≥ 1 − 1e−7`).
pub fn validate(sigma_tilde: &AntisymMat<Complex64>) -> Result<ValidationReport> {
    let s = sigma_tilde.matrix();
    let dim = s.nrows();
    if dim.is_multiple_of(2) {
        return Err(Error::Dimension(format!("extended covariance must have odd size, got {dim}")));
    }
    let scale = s.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let re = s.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
    if re > 1e-12 * scale {
        return Err(Error::Precondition(format!("extended covariance has real part {re:e}")));
    }
    let m = AntisymMat::from_raw(s.map(|c| c.im));
    let (_, lambdas) = block_diagonalize(&m);
    let valid = lambdas.iter().all(|l| l.abs() <= 1.0 + ADMISSIBILITY_TOL);
    let pure = lambdas.iter().all(|l| l.abs() >= 1.0 - PURE_TOL);
    let rank = 2 * lambdas.iter().filter(|l| l.abs() > 1e-9).count();
    Ok(ValidationReport { valid, pure, lambdas, rank })
}

fn thermal_generator(h: &AntisymMat<f64>, d: &[f64]) -> Result<AntisymMat<f64>> {
    let dim = h.dim();
    if dim % 2 == 1 || d.len() != dim {
        return Err(Error::Dimension(format!("generator must be 2n×2n with a 2n-vector, got {dim} and {}", d.len())));
    }
    let mut k = DMatrix::zeros(dim + 1, dim + 1);
    k.view_mut((0, 0), (dim, dim)).copy_from(h.matrix());
    for (j, &v) in d.iter().enumerate() {
        k[(j, dim)] = v;
        k[(dim, j)] = -v;
    }
    Ok(AntisymMat::from_raw(k))
}

/// Thermal state `e^{−H}/Tr e^{−H}` of `H = (i/2) γᵀhγ + dᵀγ`.
///
/// With `K = [[h, d], [−dᵀ, 0]]` brought to canonical form
/// `O K Oᵀ = ⊕ β_j J`, each canonical mode is `(1 − tanh β_j · Z)/2`-like,
/// i.e. `M̃ = Oᵀ (⊕ −tanh β_j J) O`.
pub fn from_thermal(h: &AntisymMat<f64>, d: &[f64]) -> Result<DGaussState> {
    let k = thermal_generator(h, d)?;
    let (o, betas) = block_diagonalize(&k);
    let dim = k.dim();
    let mut diag = DMatrix::zeros(dim, dim);
    for (j, b) in betas.iter().enumerate() {
        let t = b.tanh();
        diag[(2 * j, 2 * j + 1)] = -t;
        diag[(2 * j + 1, 2 * j)] = t;
    }
    let om = o.matrix();
    let ext = om.transpose() * diag * om;
    Ok(DGaussState::from_extended_unchecked((&ext - ext.transpose()) * 0.5))
}

/// Inverse of [`from_thermal`]. Fails with [`Error::Saturated`] naming the
/// canonical modes (1-based, descending λ) that are pure to `1e−9`.
pub fn to_thermal(state: &DGaussState) -> Result<(AntisymMat<f64>, Vec<f64>)> {
    let (r, lambdas) = block_diagonalize(&AntisymMat::from_raw(state.ext.clone()));
    let saturated: Vec<usize> = lambdas
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() >= 1.0 - SATURATION_TOL)
        .map(|(j, _)| j + 1)
        .collect();
    if !saturated.is_empty() {
        return Err(Error::Saturated { modes: saturated });
    }
    let dim = state.ext.nrows();
    let mut diag = DMatrix::zeros(dim, dim);
    for (j, l) in lambdas.iter().enumerate() {
        let b = -l.atanh();
        diag[(2 * j, 2 * j + 1)] = b;
        diag[(2 * j + 1, 2 * j)] = -b;
    }
    let rm = r.matrix();
    let k = rm.transpose() * diag * rm;
    let d2 = dim - 1;
    let h = k.view((0, 0), (d2, d2)).into_owned();
    let d = (0..d2).map(|j| k[(j, d2)]).collect();
    Ok((AntisymMat::from_raw((&h - h.transpose()) * 0.5), d))
}
