//! Exact dense reference implementation over the full 2ⁿ-dimensional Hilbert
//! space. Exponential by nature and capped in size; it exists to validate the
//! polynomial-time paths.
//!
//! Qubit 1 is the leftmost tensor factor, i.e. the most significant bit of a
//! basis index. Majorana operators follow the Jordan–Wigner strings
//! `γ_{2j−1} = Z^{⊗(j−1)} X I…` and `γ_{2j} = Z^{⊗(j−1)} Y I…`, so that
//! `iγ_1γ_2 = iXY = −Z` on line 1.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{check_index_set, pfaffian_in_place, AntisymMat};

/// Largest register the oracle will build.
pub const MAX_QUBITS: usize = 8;
/// Cap for operations on a single n-qubit register.
pub const SINGLE_REGISTER_CAP: usize = 6;
/// Cap on n for operations acting on 2n qubits (convolution, Choi states).
pub const PAIRED_REGISTER_CAP: usize = 4;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn check_cap(n: usize, cap: usize, what: &str) -> Result<()> {
    if n > cap {
        return Err(Error::Cap(format!("{what} limited to n <= {cap}, got n = {n}")));
    }
    Ok(())
}

/// Pauli string `i^phase · X^x Z^z` (X part applied after the Z part).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Pauli {
    phase: u8,
    x: usize,
    z: usize,
}

impl Pauli {
    const IDENTITY: Pauli = Pauli { phase: 0, x: 0, z: 0 };

    fn mul(self, o: Pauli) -> Pauli {
        let swaps = (self.z & o.x).count_ones() as u8;
        Pauli { phase: (self.phase + o.phase + 2 * swaps) % 4, x: self.x ^ o.x, z: self.z ^ o.z }
    }

    fn phase_value(&self) -> Complex64 {
        [ONE, I, -ONE, -I][self.phase as usize]
    }

    /// Entry at `(s ^ x, s)`.
    fn column_entry(&self, s: usize) -> Complex64 {
        let v = self.phase_value();
        if (self.z & s).count_ones() % 2 == 1 {
            -v
        } else {
            v
        }
    }

    fn add_to(&self, coef: Complex64, m: &mut DMatrix<Complex64>) {
        for s in 0..m.ncols() {
            m[(s ^ self.x, s)] += coef * self.column_entry(s);
        }
    }

    /// `Tr(P† A)`.
    fn inner(&self, a: &DMatrix<Complex64>) -> Complex64 {
        (0..a.ncols()).map(|s| self.column_entry(s).conj() * a[(s ^ self.x, s)]).sum()
    }
}

fn qubit_bit(n: usize, q: usize) -> usize {
    1 << (n - q)
}

pub(crate) fn majorana_pauli(n: usize, j: usize) -> Pauli {
    let q = j.div_ceil(2);
    let zs: usize = (1..q).map(|p| qubit_bit(n, p)).sum();
    if j % 2 == 1 {
        Pauli { phase: 0, x: qubit_bit(n, q), z: zs }
    } else {
        Pauli { phase: 1, x: qubit_bit(n, q), z: zs | qubit_bit(n, q) }
    }
}

/// Pauli string of `γ_J` where bit `j−1` of `mask` selects `γ_j`.
pub(crate) fn monomial_pauli(n: usize, mask: usize) -> Pauli {
    let mut p = Pauli::IDENTITY;
    let mut m = mask;
    while m != 0 {
        let j = m.trailing_zeros() as usize + 1;
        p = p.mul(majorana_pauli(n, j));
        m &= m - 1;
    }
    p
}

pub(crate) fn mask_of(idx: &[usize]) -> usize {
    idx.iter().fold(0, |m, &j| m | (1 << (j - 1)))
}

pub(crate) fn indices_of(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// An exact operator on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOp {
    n: usize,
    m: DMatrix<Complex64>,
}

impl DenseOp {
    pub fn new(n: usize, m: DMatrix<Complex64>) -> Result<Self> {
        check_cap(n, MAX_QUBITS, "dense operators")?;
        let d = 1usize << n;
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Dimension(format!(
                "{n}-qubit operator needs {d}x{d} entries, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self { n, m })
    }

    pub fn identity(n: usize) -> Self {
        let d = 1 << n;
        Self { n, m: DMatrix::identity(d, d) }
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `amps`.
    pub fn from_state_vector(n: usize, amps: &[Complex64]) -> Result<Self> {
        let d = 1usize << n;
        if amps.len() != d {
            return Err(Error::Dimension(format!("{n}-qubit state needs {d} amplitudes")));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Precondition("zero state vector".into()));
        }
        let v = DMatrix::from_iterator(d, 1, amps.iter().map(|a| a / norm));
        DenseOp::new(n, &v * v.adjoint())
    }

    /// Computational basis projector `|s⟩⟨s|`, qubit 1 as the leading bit.
    pub fn basis_state(n: usize, s: usize) -> Self {
        let d = 1 << n;
        let mut m = DMatrix::zeros(d, d);
        m[(s, s)] = ONE;
        Self { n, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn dagger(&self) -> Self {
        Self { n: self.n, m: self.m.adjoint() }
    }

    pub fn mul(&self, o: &DenseOp) -> Self {
        Self { n: self.n, m: &self.m * &o.m }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { n: self.n, m: &self.m * c }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// `U A U†`.
    pub fn conjugated_by(&self, u: &DenseOp) -> Self {
        Self { n: self.n, m: &u.m * &self.m * u.m.adjoint() }
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, o: &DenseOp) -> Result<Self> {
        DenseOp::new(self.n + o.n, self.m.kronecker(&o.m))
    }

    /// Traces out the last `n − keep` qubits.
    pub fn partial_trace(&self, keep: usize) -> Result<Self> {
        if keep > self.n {
            return Err(Error::Dimension(format!("cannot keep {keep} of {} qubits", self.n)));
        }
        let dk = 1usize << keep;
        let dr = 1usize << (self.n - keep);
        let m = DMatrix::from_fn(dk, dk, |a, b| (0..dr).map(|e| self.m[(a * dr + e, b * dr + e)]).sum());
        Ok(Self { n: keep, m })
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.m - self.m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn unitarity_error(&self) -> f64 {
        let d = self.m.nrows();
        (self.m.adjoint() * &self.m - DMatrix::identity(d, d)).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest |entry| of `A − P A P` for the parity operator `P = Z^{⊗n}`.
    pub fn parity_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.m.nrows() {
            for c in 0..self.m.ncols() {
                if (r.count_ones() + c.count_ones()) % 2 == 1 {
                    worst = worst.max(self.m[(r, c)].norm());
                }
            }
        }
        worst
    }

    pub fn is_even(&self, tol: f64) -> bool {
        self.parity_violation() <= tol
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.m + self.m.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Checks the density-operator invariants: Hermitian and unit trace to
    /// 1e−10, eigenvalues above −1e−9.
    pub fn check_state(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > 1e-10 {
            return Err(Error::Precondition(format!("state is not Hermitian (error {herm:e})")));
        }
        let tr = self.trace();
        if (tr - ONE).norm() > 1e-10 {
            return Err(Error::Precondition(format!("state trace is {tr}")));
        }
        let low = self.hermitian_eigenvalues()[0];
        if low < -1e-9 {
            return Err(Error::Precondition(format!("state has eigenvalue {low:e}")));
        }
        Ok(())
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// `Tr(A B)`.
    pub fn trace_product(&self, o: &DenseOp) -> Complex64 {
        let mut s = ZERO;
        for r in 0..self.m.nrows() {
            for c in 0..self.m.ncols() {
                s += self.m[(r, c)] * o.m[(c, r)];
            }
        }
        s
    }

    /// `max |A − e^{iφ} B|` with φ aligning the overlap `Tr(B†A)`.
    pub fn projective_distance(&self, o: &DenseOp) -> f64 {
        let ov: Complex64 = self.m.iter().zip(o.m.iter()).map(|(a, b)| b.conj() * a).sum();
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { ONE };
        (&self.m - &o.m * phase).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, o: &DenseOp) -> f64 {
        (&self.m - &o.m).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Dense `γ_j` on `n` qubits, `1 ≤ j ≤ 2n`.
pub fn majorana(n: usize, j: usize) -> Result<DenseOp> {
    check_cap(n, MAX_QUBITS, "majorana")?;
    if j == 0 || j > 2 * n {
        return Err(Error::Index(format!("Majorana index {j} outside 1..={}", 2 * n)));
    }
    Ok(pauli_op(n, majorana_pauli(n, j), ONE))
}

/// Dense `γ_J = γ_{J_1} ⋯ γ_{J_k}` for a sorted 1-based index set.
pub fn majorana_monomial(n: usize, idx: &[usize]) -> Result<DenseOp> {
    check_cap(n, MAX_QUBITS, "majorana")?;
    check_index_set(idx, 2 * n)?;
    Ok(pauli_op(n, monomial_pauli(n, mask_of(idx)), ONE))
}

fn pauli_op(n: usize, p: Pauli, c: Complex64) -> DenseOp {
    let d = 1 << n;
    let mut m = DMatrix::zeros(d, d);
    p.add_to(c, &mut m);
    DenseOp { n, m }
}

/// All 4ⁿ Majorana moments `A_J = Tr(γ_J† A)` of an operator.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    n: usize,
    values: Vec<Complex64>,
}

impl MomentTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Moment for a sorted 1-based index tuple.
    pub fn get(&self, idx: &[usize]) -> Result<Complex64> {
        check_index_set(idx, 2 * self.n)?;
        Ok(self.values[mask_of(idx)])
    }

    /// Moment addressed by bitmask, bit `j−1` selecting `γ_j`.
    pub fn by_mask(&self, mask: usize) -> Complex64 {
        self.values[mask]
    }

    /// Iterates `(sorted index tuple, moment)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, Complex64)> + '_ {
        self.values.iter().enumerate().map(|(m, &v)| (indices_of(m), v))
    }

    /// `2^{−n} Σ_J A_J γ_J`.
    pub fn reconstruct(&self) -> DenseOp {
        let d = 1usize << self.n;
        let mut m = DMatrix::zeros(d, d);
        let w = 1.0 / d as f64;
        for (mask, &v) in self.values.iter().enumerate() {
            if v != ZERO {
                monomial_pauli(self.n, mask).add_to(v * w, &mut m);
            }
        }
        DenseOp { n: self.n, m }
    }
}

pub(crate) fn table_from_values(n: usize, values: Vec<Complex64>) -> MomentTable {
    MomentTable { n, values }
}

pub fn moments(a: &DenseOp) -> MomentTable {
    let n = a.n;
    let count = 1usize << (2 * n);
    let mut paulis = vec![Pauli::IDENTITY; count];
    for mask in 1..count {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        paulis[mask] = paulis[mask & !(1 << top)].mul(majorana_pauli(n, top + 1));
    }
    let values = paulis.iter().map(|p| p.inner(&a.m)).collect();
    MomentTable { n, values }
}

/// Single moment `Tr(γ_J† A)`.
pub fn moment(a: &DenseOp, idx: &[usize]) -> Result<Complex64> {
    check_index_set(idx, 2 * a.n)?;
    Ok(monomial_pauli(a.n, mask_of(idx)).inner(&a.m))
}

/// Complex extended covariance `Σ̃` of an operator normalized by its trace:
/// `Σ̃_{jk} = A_{(j,k)}/Tr A` for `j < k` and `Σ̃_{j,2n+1} = i·A_{(j)}/Tr A`.
pub fn extended_covariance(a: &DenseOp) -> DMatrix<Complex64> {
    let n = a.n;
    let dim = 2 * n + 1;
    let tr = a.trace();
    let mut s = DMatrix::zeros(dim, dim);
    for j in 1..=2 * n {
        let mu = monomial_pauli(n, 1 << (j - 1)).inner(&a.m) / tr;
        s[(j - 1, 2 * n)] = I * mu;
        s[(2 * n, j - 1)] = -I * mu;
        for k in j + 1..=2 * n {
            let v = monomial_pauli(n, (1 << (j - 1)) | (1 << (k - 1))).inner(&a.m) / tr;
            s[(j - 1, k - 1)] = v;
            s[(k - 1, j - 1)] = -v;
        }
    }
    s
}

/// Real carrier `M̃ = −iΣ̃` of a Hermitian state (imaginary residue dropped).
pub fn real_extended_covariance(a: &DenseOp) -> DMatrix<f64> {
    extended_covariance(a).map(|c| (c * -I).re)
}

/// Largest deviation between the trace-normalized moments of `a` and the Wick
/// reconstruction from its own first and second moments. Zero exactly for
/// (displaced) Gaussian operators.
pub fn wick_deviation(a: &DenseOp) -> f64 {
    let n = a.n;
    let tr = a.trace();
    let table = moments(a);
    let sigma = extended_covariance(a);
    let dim = 2 * n + 1;
    let mut worst = 0.0f64;
    let mut buf = Vec::with_capacity(dim * dim);
    for (mask, &v) in table.values.iter().enumerate() {
        let mut idx: Vec<usize> = indices_of(mask);
        let odd = idx.len() % 2 == 1;
        if odd {
            idx.push(dim);
        }
        buf.clear();
        for &p in &idx {
            for &q in &idx {
                buf.push(sigma[(p - 1, q - 1)]);
            }
        }
        let mut pred = pfaffian_in_place(&mut buf, idx.len());
        if odd {
            pred *= -I;
        }
        worst = worst.max((v / tr - pred).norm());
    }
    worst
}

/// `exp(iH)` for Hermitian `H`.
pub(crate) fn expi_hermitian(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let herm = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let v = &eig.eigenvectors;
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, l)));
    v * d * v.adjoint()
}

/// Dense `½ Σ_{jk} h_{jk} γ_jγ_k + i Σ_j d_j γ_j`.
pub fn quadratic_generator(n: usize, h: &AntisymMat<f64>, d: &[f64]) -> Result<DMatrix<Complex64>> {
    check_cap(n, MAX_QUBITS, "quadratic generator")?;
    if h.dim() != 2 * n || d.len() != 2 * n {
        return Err(Error::Dimension(format!("generator for n = {n} needs 2n = {} entries", 2 * n)));
    }
    let dd = 1usize << n;
    let mut g = DMatrix::zeros(dd, dd);
    for j in 1..=2 * n {
        if d[j - 1] != 0.0 {
            majorana_pauli(n, j).add_to(I * d[j - 1], &mut g);
        }
        for k in j + 1..=2 * n {
            let c = h.matrix()[(j - 1, k - 1)];
            if c != 0.0 {
                monomial_pauli(n, (1 << (j - 1)) | (1 << (k - 1))).add_to(Complex64::new(c, 0.0), &mut g);
            }
        }
    }
    Ok(g)
}

/// `exp(½ γᵀhγ + i dᵀγ)`.
pub fn exp_quadratic(n: usize, h: &AntisymMat<f64>, d: &[f64]) -> Result<DenseOp> {
    check_cap(n, SINGLE_REGISTER_CAP, "exp_quadratic")?;
    let g = quadratic_generator(n, h, d)?;
    Ok(DenseOp { n, m: expi_hermitian(&(g * -I)) })
}

/// Exponential of an anti-Hermitian operator.
pub fn exp_anti_hermitian(g: &DenseOp) -> DenseOp {
    DenseOp { n: g.n, m: expi_hermitian(&(&g.m * -I)) }
}

/// Thermal state `e^{−H}/Tr e^{−H}` of `H = (i/2) γᵀhγ + dᵀγ`.
pub fn thermal_state(n: usize, h: &AntisymMat<f64>, d: &[f64]) -> Result<DenseOp> {
    check_cap(n, SINGLE_REGISTER_CAP, "thermal_state")?;
    let quad = quadratic_generator(n, h, &vec![0.0; 2 * n])?;
    let lin = quadratic_generator(n, &AntisymMat::zeros(2 * n), d)?;
    let hm = quad * I - lin * I;
    let eig = SymmetricEigen::new((&hm + hm.adjoint()) * Complex64::new(0.5, 0.0));
    let shift = eig.eigenvalues.min();
    let w = eig.eigenvalues.map(|l| Complex64::new((-(l - shift)).exp(), 0.0));
    let v = &eig.eigenvectors;
    let rho = v * DMatrix::from_diagonal(&w) * v.adjoint();
    let tr = rho.trace();
    Ok(DenseOp { n, m: rho / tr })
}

/// Beam-splitter angle of the convolution unitary.
pub const CONVOLUTION_ANGLE: f64 = std::f64::consts::PI / 8.0;

/// `W = exp(θ Σ_j γ_j γ_{2n+j})` on 2n qubits with θ = π/8, a balanced
/// fermionic beam splitter (θ = π/4 would exchange the two registers).
pub fn conv_unitary(n: usize) -> Result<DenseOp> {
    check_cap(n, PAIRED_REGISTER_CAP, "conv_unitary")?;
    let m = 2 * n;
    let dd = 1usize << m;
    let mut g = DMatrix::zeros(dd, dd);
    for j in 1..=2 * n {
        monomial_pauli(m, (1 << (j - 1)) | (1 << (2 * n + j - 1))).add_to(Complex64::new(CONVOLUTION_ANGLE, 0.0), &mut g);
    }
    Ok(DenseOp { n: m, m: expi_hermitian(&(g * -I)) })
}

/// `ρ ⊠ σ = Tr₂[W (ρ⊗σ) W†]` for even states.
pub fn fermionic_convolution(rho: &DenseOp, sigma: &DenseOp) -> Result<DenseOp> {
    if rho.n != sigma.n {
        return Err(Error::Dimension("convolution inputs differ in size".into()));
    }
    for s in [rho, sigma] {
        s.check_state()?;
        if !s.is_even(1e-10) {
            return Err(Error::Precondition("convolution is defined for even states only".into()));
        }
    }
    let w = conv_unitary(rho.n)?;
    rho.tensor(sigma)?.conjugated_by(&w).partial_trace(rho.n)
}

/// Fermionic swap of lines `a < b`:
/// `exp[(π/4)(γ_{2a−1}γ_{2b} − γ_{2a}γ_{2b−1} − γ_{2a−1}γ_{2a} − γ_{2b−1}γ_{2b})]`.
pub fn fswap(n: usize, a: usize, b: usize) -> Result<DenseOp> {
    check_cap(n, MAX_QUBITS, "fswap")?;
    if a == 0 || a >= b || b > n {
        return Err(Error::Index(format!("fswap needs 1 <= a < b <= {n}, got ({a}, {b})")));
    }
    let q = std::f64::consts::FRAC_PI_4;
    let terms = [(2 * a - 1, 2 * b, q), (2 * a, 2 * b - 1, -q), (2 * a - 1, 2 * a, -q), (2 * b - 1, 2 * b, -q)];
    let dd = 1usize << n;
    let mut g = DMatrix::zeros(dd, dd);
    for (j, k, c) in terms {
        monomial_pauli(n, (1 << (j - 1)) | (1 << (k - 1))).add_to(Complex64::new(c, 0.0), &mut g);
    }
    Ok(DenseOp { n, m: expi_hermitian(&(g * -I)) })
}

/// `V = exp(−i(π/4) γ_{2n+2})` on n+1 qubits.
pub fn embed_v(n: usize) -> Result<DenseOp> {
    check_cap(n + 1, MAX_QUBITS, "embed_V")?;
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = DenseOp::identity(n + 1).m * Complex64::new(c, 0.0);
    majorana_pauli(n + 1, 2 * n + 2).add_to(Complex64::new(0.0, -c), &mut v);
    Ok(DenseOp { n: n + 1, m: v })
}

/// Fermionic maximally entangled state on 2n qubits,
/// `ρ_E = Π_{j=1}^{2n} (I + iγ_jγ_{2n+j})/2`.
pub fn max_entangled(n: usize) -> Result<DenseOp> {
    check_cap(n, PAIRED_REGISTER_CAP, "max_entangled")?;
    let m = 2 * n;
    let mut rho = DenseOp::identity(m);
    for j in 1..=2 * n {
        let mut f = DenseOp::identity(m).m * Complex64::new(0.5, 0.0);
        monomial_pauli(m, (1 << (j - 1)) | (1 << (2 * n + j - 1))).add_to(Complex64::new(0.0, 0.5), &mut f);
        rho.m = &rho.m * f;
    }
    Ok(rho)
}

/// `Tr[O(K,x) ρ]` with `O(K,x) = Π_j (I + (−1)^{x_j} Z_{K_j})/2`.
pub fn born_probability(rho: &DenseOp, lines: &[usize], x: &[bool]) -> Result<f64> {
    if lines.len() != x.len() {
        return Err(Error::Dimension("measurement lines and outcome differ in length".into()));
    }
    check_index_set(lines, rho.n)?;
    let mut p = 0.0;
    for s in 0..rho.m.nrows() {
        if lines.iter().zip(x).all(|(&q, &b)| (s & qubit_bit(rho.n, q) != 0) == b) {
            p += rho.m[(s, s)].re;
        }
    }
    Ok(p)
}

/// Single-qubit unitary `u` acting on line `q`.
pub fn single_qubit(n: usize, q: usize, u: [[Complex64; 2]; 2]) -> Result<DenseOp> {
    check_cap(n, MAX_QUBITS, "single_qubit")?;
    if q == 0 || q > n {
        return Err(Error::Index(format!("line {q} outside 1..={n}")));
    }
    let d = 1usize << n;
    let bit = qubit_bit(n, q);
    let m = DMatrix::from_fn(d, d, |r, c| {
        if r & !bit != c & !bit {
            ZERO
        } else {
            u[usize::from(r & bit != 0)][usize::from(c & bit != 0)]
        }
    });
    Ok(DenseOp { n, m })
}

/// Controlled-X with the given control and target lines.
pub fn cx(n: usize, control: usize, target: usize) -> Result<DenseOp> {
    check_cap(n, MAX_QUBITS, "cx")?;
    if control == target || control == 0 || target == 0 || control > n || target > n {
        return Err(Error::Index(format!("invalid CX lines ({control}, {target})")));
    }
    let d = 1usize << n;
    let (cb, tb) = (qubit_bit(n, control), qubit_bit(n, target));
    let mut m = DMatrix::zeros(d, d);
    for s in 0..d {
        let r = if s & cb != 0 { s ^ tb } else { s };
        m[(r, s)] = ONE;
    }
    Ok(DenseOp { n, m })
}

/// Controlled-Z between two lines.
pub fn cz(n: usize, a: usize, b: usize) -> Result<DenseOp> {
    check_cap(n, MAX_QUBITS, "cz")?;
    if a == b || a == 0 || b == 0 || a > n || b > n {
        return Err(Error::Index(format!("invalid CZ lines ({a}, {b})")));
    }
    let d = 1usize << n;
    let (ab, bb) = (qubit_bit(n, a), qubit_bit(n, b));
    let m = DMatrix::from_fn(d, d, |r, c| {
        if r != c {
            ZERO
        } else if r & ab != 0 && r & bb != 0 {
            -ONE
        } else {
            ONE
        }
    });
    Ok(DenseOp { n, m })
}

/// Density operator `(I + r·σ)/2` of a single qubit.
pub fn bloch_state(r: [f64; 3]) -> DenseOp {
    let h = Complex64::new(0.5, 0.0);
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            h * (1.0 + r[2]),
            Complex64::new(0.5 * r[0], -0.5 * r[1]),
            Complex64::new(0.5 * r[0], 0.5 * r[1]),
            h * (1.0 - r[2]),
        ],
    );
    DenseOp { n: 1, m }
}

/// `⊗_j (I + r_j·σ)/2`.
pub fn product_state(blochs: &[[f64; 3]]) -> Result<DenseOp> {
    check_cap(blochs.len(), MAX_QUBITS, "product_state")?;
    let mut rho = DenseOp::identity(0);
    for &r in blochs {
        rho = rho.tensor(&bloch_state(r))?;
    }
    Ok(rho)
}
