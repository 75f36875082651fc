//! Kernels for antisymmetric matrices: Pfaffians, canonical forms, exponentials
//! into SO(m), and plane-rotation factorizations.
//!
//! Subspace labels in this module (`PlaneRotation` axes, restriction index
//! sets) are 1-based, matching Majorana labels γ_1 … γ_m.

use std::collections::VecDeque;
use std::f64::consts::PI;

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Antisymmetry tolerance applied on construction.
pub const ANTISYM_TOL: f64 = 1e-12;
/// Orthogonality and determinant tolerance for [`Rotation`].
pub const ROTATION_TOL: f64 = 1e-10;
/// Column entries below this magnitude are treated as already eliminated.
const ELIM_ZERO: f64 = 1e-14;

/// Scalars the kernels run over: `f64` and `Complex64`.
pub trait Scalar: ComplexField<RealField = f64> + Copy {}
impl Scalar for f64 {}
impl Scalar for Complex64 {}

/// A square matrix with `A = -Aᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntisymMat<T: Scalar = f64> {
    m: DMatrix<T>,
}

impl<T: Scalar> AntisymMat<T> {
    /// Validates antisymmetry to [`ANTISYM_TOL`] (relative to the largest
    /// entry when that exceeds 1) and stores the exactly antisymmetrized matrix.
    pub fn new(m: DMatrix<T>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!(
                "antisymmetric matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.iter().map(|x| x.modulus()).fold(1.0, f64::max);
        let dev = (&m + m.transpose()).iter().map(|x| x.modulus()).fold(0.0, f64::max);
        if dev > ANTISYM_TOL * scale {
            return Err(Error::NotAntisymmetric(dev));
        }
        let half = T::from_real(0.5);
        let m = (&m - m.transpose()) * half;
        Ok(Self { m })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: DMatrix::zeros(dim, dim) }
    }

    /// Wraps a matrix already known to be exactly antisymmetric.
    pub(crate) fn from_raw(m: DMatrix<T>) -> Self {
        debug_assert!(m.nrows() == m.ncols());
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.m
    }

    pub fn pfaffian(&self) -> Result<T> {
        if self.dim() % 2 == 1 {
            return Err(Error::Dimension(format!("Pfaffian of odd dimension {}", self.dim())));
        }
        let m = self.dim();
        let mut buf: Vec<T> = (0..m * m).map(|k| self.m[(k / m, k % m)]).collect();
        Ok(pfaffian_in_place(&mut buf, m))
    }

    /// Pfaffian of the restriction to the sorted 1-based index set `idx`.
    pub fn pfaffian_restricted(&self, idx: &[usize]) -> Result<T> {
        check_index_set(idx, self.dim())?;
        if idx.len() % 2 == 1 {
            return Err(Error::Dimension(format!("restriction of odd size {}", idx.len())));
        }
        let k = idx.len();
        let mut buf: Vec<T> = Vec::with_capacity(k * k);
        for &a in idx {
            for &b in idx {
                buf.push(self.m[(a - 1, b - 1)]);
            }
        }
        Ok(pfaffian_in_place(&mut buf, k))
    }
}

impl AntisymMat<f64> {
    /// The same matrix scaled by i.
    pub fn to_complex(&self) -> AntisymMat<Complex64> {
        AntisymMat { m: self.m.map(|x| Complex64::new(0.0, x)) }
    }
}

pub(crate) fn check_index_set(idx: &[usize], dim: usize) -> Result<()> {
    for (pos, &a) in idx.iter().enumerate() {
        if a == 0 || a > dim {
            return Err(Error::Index(format!("index {a} outside 1..={dim}")));
        }
        if pos > 0 && idx[pos - 1] >= a {
            return Err(Error::Index(format!("index set {idx:?} is not strictly increasing")));
        }
    }
    Ok(())
}

/// Parlett-Reid skew tridiagonalization with partial pivoting on a row-major
/// `m×m` buffer. Destroys the buffer. `m` must be even.
pub(crate) fn pfaffian_in_place<T: Scalar>(a: &mut [T], m: usize) -> T {
    let mut pf = T::one();
    if m == 0 {
        return pf;
    }
    let mut k = 0;
    while k + 1 < m {
        let mut kp = k + 1;
        let mut best = a[(k + 1) * m + k].modulus();
        for i in k + 2..m {
            let v = a[i * m + k].modulus();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            for c in 0..m {
                a.swap((k + 1) * m + c, kp * m + c);
            }
            for r in 0..m {
                a.swap(r * m + k + 1, r * m + kp);
            }
            pf = -pf;
        }
        let piv = a[k * m + k + 1];
        if best == 0.0 {
            return T::zero();
        }
        pf *= piv;
        if k + 2 < m {
            let tau: Vec<T> = (k + 2..m).map(|c| a[k * m + c] / piv).collect();
            let col: Vec<T> = (k + 2..m).map(|r| a[r * m + k + 1]).collect();
            for (ri, r) in (k + 2..m).enumerate() {
                for (ci, c) in (k + 2..m).enumerate() {
                    a[r * m + c] += tau[ri] * col[ci] - col[ri] * tau[ci];
                }
            }
        }
        k += 2;
    }
    pf
}

/// An element of SO(m).
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation {
    r: DMatrix<f64>,
}

impl Rotation {
    /// Checks `RᵀR = I` and `det R = 1` to [`ROTATION_TOL`].
    pub fn new(r: DMatrix<f64>) -> Result<Self> {
        if r.nrows() != r.ncols() {
            return Err(Error::Dimension("rotation must be square".into()));
        }
        let m = r.nrows();
        let dev = (r.transpose() * &r - DMatrix::identity(m, m)).amax();
        if dev > ROTATION_TOL {
            return Err(Error::NotRotation(format!("|RᵀR - I| = {dev:e}")));
        }
        let det = r.clone().determinant();
        if (det - 1.0).abs() > ROTATION_TOL {
            return Err(Error::NotRotation(format!("det R = {det}")));
        }
        Ok(Self { r })
    }

    pub(crate) fn from_raw(r: DMatrix<f64>) -> Self {
        Self { r }
    }

    pub fn identity(m: usize) -> Self {
        Self { r: DMatrix::identity(m, m) }
    }

    pub fn dim(&self) -> usize {
        self.r.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.r
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.r
    }

    pub fn transpose(&self) -> Rotation {
        Rotation { r: self.r.transpose() }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation { r: &self.r * &other.r }
    }
}

/// The rotation `exp(θ s_jk)` with `s_jk = e_j e_kᵀ − e_k e_jᵀ`, so that
/// `R_jj = R_kk = cos θ`, `R_jk = sin θ`, `R_kj = −sin θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneRotation {
    pub j: usize,
    pub k: usize,
    pub angle: f64,
}

impl PlaneRotation {
    pub fn new(j: usize, k: usize, angle: f64) -> Result<Self> {
        if j == k || j == 0 || k == 0 {
            return Err(Error::Index(format!("invalid plane axes ({j}, {k})")));
        }
        Ok(Self { j, k, angle: normalize_angle(angle) })
    }

    /// Same rotation with axes in increasing order.
    pub fn ordered(self) -> Self {
        if self.j < self.k {
            self
        } else {
            Self { j: self.k, k: self.j, angle: normalize_angle(-self.angle) }
        }
    }

    pub fn inverse(self) -> Self {
        Self { angle: normalize_angle(-self.angle), ..self }
    }

    pub fn matrix(&self, dim: usize) -> DMatrix<f64> {
        let mut r = DMatrix::identity(dim, dim);
        let (j, k) = (self.j - 1, self.k - 1);
        let (s, c) = self.angle.sin_cos();
        r[(j, j)] = c;
        r[(k, k)] = c;
        r[(j, k)] = s;
        r[(k, j)] = -s;
        r
    }

    /// `X ← G X`, touching two rows.
    pub fn apply_left(&self, x: &mut DMatrix<f64>) {
        let (j, k) = (self.j - 1, self.k - 1);
        let (s, c) = self.angle.sin_cos();
        for col in 0..x.ncols() {
            let (a, b) = (x[(j, col)], x[(k, col)]);
            x[(j, col)] = c * a + s * b;
            x[(k, col)] = -s * a + c * b;
        }
    }

    /// `X ← X Gᵀ`, touching two columns.
    pub fn apply_right_transpose(&self, x: &mut DMatrix<f64>) {
        let (j, k) = (self.j - 1, self.k - 1);
        let (s, c) = self.angle.sin_cos();
        for row in 0..x.nrows() {
            let (a, b) = (x[(row, j)], x[(row, k)]);
            x[(row, j)] = c * a + s * b;
            x[(row, k)] = -s * a + c * b;
        }
    }

    /// `X ← G X Gᵀ` in O(dim).
    pub fn conjugate(&self, x: &mut DMatrix<f64>) {
        self.apply_left(x);
        self.apply_right_transpose(x);
    }
}

/// Maps an angle into (−π, π].
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Canonical form `R M Rᵀ = ⊕ [[0, λ_j], [−λ_j, 0]]` (⊕ 0 when the dimension
/// is odd, in the last subspace) with `λ` descending and `det R = 1`.
///
/// For an even-dimensional nonsingular `M` with negative Pfaffian the last
/// `λ` comes out negative, since `Pf(R M Rᵀ) = det R · Pf(M) = Πλ`.
pub fn block_diagonalize(m: &AntisymMat<f64>) -> (Rotation, Vec<f64>) {
    let dim = m.dim();
    if dim == 0 {
        return (Rotation::identity(0), vec![]);
    }
    let a = m.matrix();
    if a.amax() == 0.0 {
        return (Rotation::identity(dim), vec![0.0; dim / 2]);
    }
    let scale = a.amax().max(1.0);
    // QᵀMQ is antisymmetric and quasi-triangular, hence block diagonal. The
    // shift leaves Q unchanged and keeps the deflation test, which is relative
    // to the diagonal, away from the zero diagonal of M.
    let shifted = a + DMatrix::identity(dim, dim) * scale;
    let (q, _) = nalgebra::linalg::Schur::try_new(shifted, f64::EPSILON, 100_000)
        .expect("QR iteration converges on normal matrices")
        .unpack();
    let t = q.transpose() * a * &q;
    let thresh = 1e-12 * scale;
    let mut blocks: Vec<(f64, usize, usize)> = Vec::with_capacity(dim / 2);
    let mut singles = Vec::new();
    let mut i = 0;
    while i < dim {
        if i + 1 < dim && t[(i + 1, i)].abs() > thresh {
            let l = t[(i, i + 1)];
            blocks.push(if l >= 0.0 { (l, i, i + 1) } else { (-l, i + 1, i) });
            i += 2;
        } else {
            singles.push(i);
            i += 1;
        }
    }
    blocks.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut cols: Vec<usize> = blocks.iter().flat_map(|&(_, p, r)| [p, r]).collect();
    for pair in singles.chunks(2) {
        match *pair {
            [p, r] if t[(p, r)] < 0.0 => cols.extend([r, p]),
            _ => cols.extend_from_slice(pair),
        }
    }
    let mut r = DMatrix::from_fn(dim, dim, |row, col| q[(col, cols[row])]);
    if r.clone().determinant() < 0.0 {
        if dim % 2 == 1 {
            r.row_mut(dim - 1).neg_mut();
        } else {
            r.swap_rows(dim - 2, dim - 1);
        }
    }
    let c = &r * a * r.transpose();
    let lambdas = (0..dim / 2).map(|j| c[(2 * j, 2 * j + 1)]).collect();
    (Rotation::from_raw(r), lambdas)
}

/// `exp(h)` computed through the canonical form, so the result is orthogonal
/// to working precision.
pub fn expm_antisym(h: &AntisymMat<f64>) -> Rotation {
    let dim = h.dim();
    let (r, lambdas) = block_diagonalize(h);
    let mut e = DMatrix::<f64>::identity(dim, dim);
    for (j, &l) in lambdas.iter().enumerate() {
        let (s, c) = l.sin_cos();
        e[(2 * j, 2 * j)] = c;
        e[(2 * j + 1, 2 * j + 1)] = c;
        e[(2 * j, 2 * j + 1)] = s;
        e[(2 * j + 1, 2 * j)] = -s;
    }
    let rm = r.matrix();
    Rotation::from_raw(rm.transpose() * e * rm)
}

/// Principal matrix logarithm of a rotation, via the real Schur form.
/// Fails with [`Error::LogBranch`] when `R` has eigenvalue −1.
pub fn logm_rotation(r: &Rotation) -> Result<AntisymMat<f64>> {
    let dim = r.dim();
    let schur = nalgebra::linalg::Schur::try_new(r.matrix().clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    let (q, t) = schur.unpack();
    let mut l = DMatrix::<f64>::zeros(dim, dim);
    let mut i = 0;
    while i < dim {
        if i + 1 < dim && t[(i + 1, i)].abs() > 1e-12 {
            let c = 0.5 * (t[(i, i)] + t[(i + 1, i + 1)]);
            let s = 0.5 * (t[(i, i + 1)] - t[(i + 1, i)]);
            let theta = s.atan2(c);
            l[(i, i + 1)] = theta;
            l[(i + 1, i)] = -theta;
            i += 2;
        } else {
            if t[(i, i)] < 0.0 {
                return Err(Error::LogBranch);
            }
            i += 1;
        }
    }
    let out = &q * l * q.transpose();
    AntisymMat::new((&out - out.transpose()) * 0.5)
}

/// Factorizes `R` into plane rotations whose axis pairs satisfy `allowed`.
///
/// The returned list is in application order: `R = G_last ⋯ G_first`.
/// Elimination runs Givens rotations along a BFS spanning tree of the allowed
/// pairs, removing the highest-numbered leaf first. Each elimination uses at
/// most `dim` rotations, so the count is at most `dim²`.
pub fn plane_decompose(
    r: &Rotation,
    allowed: impl Fn(usize, usize) -> bool,
) -> Result<Vec<PlaneRotation>> {
    let dim = r.dim();
    if dim <= 1 {
        return Ok(vec![]);
    }
    let mut adj: Vec<Vec<usize>> = vec![vec![]; dim + 1];
    for a in 1..=dim {
        for b in a + 1..=dim {
            if allowed(a, b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    // BFS spanning tree from axis 1.
    let mut tree: Vec<Vec<usize>> = vec![vec![]; dim + 1];
    let mut seen = vec![false; dim + 1];
    let mut queue = VecDeque::from([1usize]);
    seen[1] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                tree[u].push(w);
                tree[w].push(u);
                queue.push_back(w);
            }
        }
    }
    if reached < dim {
        return Err(Error::Disconnected(dim));
    }

    let mut x = r.matrix().clone();
    let mut alive = vec![true; dim + 1];
    alive[0] = false;
    let mut ops: Vec<PlaneRotation> = Vec::new();
    for _ in 0..dim {
        let v = (1..=dim)
            .rev()
            .find(|&u| alive[u] && tree[u].iter().filter(|&&w| alive[w]).count() <= 1)
            .expect("a finite tree always has a leaf");
        // Order remaining vertices by distance from v, farthest first.
        let mut parent = vec![0usize; dim + 1];
        let mut bfs = vec![v];
        let mut visited = vec![false; dim + 1];
        visited[v] = true;
        let mut head = 0;
        while head < bfs.len() {
            let u = bfs[head];
            head += 1;
            for &w in &tree[u] {
                if alive[w] && !visited[w] {
                    visited[w] = true;
                    parent[w] = u;
                    bfs.push(w);
                }
            }
        }
        let col = v - 1;
        for &u in bfs.iter().skip(1).rev() {
            let p = parent[u];
            let (ap, au) = (x[(p - 1, col)], x[(u - 1, col)]);
            if au.abs() < ELIM_ZERO {
                continue;
            }
            let g = PlaneRotation { j: p, k: u, angle: au.atan2(ap) };
            g.apply_left(&mut x);
            ops.push(g);
        }
        if x[(col, col)] < 0.0 {
            if let Some(&w) = tree[v].iter().find(|&&w| alive[w]) {
                let g = PlaneRotation { j: v, k: w, angle: PI };
                g.apply_left(&mut x);
                ops.push(g);
            } else {
                return Err(Error::NotRotation("determinant is not +1".into()));
            }
        }
        alive[v] = false;
    }
    Ok(ops.into_iter().rev().map(PlaneRotation::inverse).collect())
}

/// Product `G_last ⋯ G_first` of plane rotations given in application order.
pub fn multiply_planes(ops: &[PlaneRotation], dim: usize) -> DMatrix<f64> {
    let mut x = DMatrix::identity(dim, dim);
    for g in ops {
        g.apply_left(&mut x);
    }
    x
}
