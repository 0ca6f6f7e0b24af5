//! Dense complex linear algebra at desk scale.
//!
//! Every quantum module in the crate sits on top of [`ComplexMatrix`]. The
//! bipartite index convention is fixed once here: in `H_A ⊗ H_B` the joint
//! index is `i_a * dim_b + i_b` (A-major), which is also the block ordering of
//! [`tensor_product`]. Vectorization is column stacking: `vec(X)[i + j*d] = X[i, j]`.

use std::ops::{Add, Mul, Sub};

use nalgebra::linalg::{SymmetricEigen, SVD};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default absolute tolerance for invariant checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest joint dimension any tensor product may produce.
pub const DIMENSION_CAP: usize = 4096;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// A finite complex matrix stored densely.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

/// Wire form: `{"rows": r, "cols": c, "data": [[re, im], ...]}`, row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let data = j.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::new(j.rows, j.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let z = m.inner[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        MatrixJson { rows: m.rows(), cols: m.cols(), data }
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("matrix shape {rows}x{cols} has an empty side")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        Self::from_nalgebra(DMatrix::from_row_slice(rows, cols, &data))
    }

    /// Row-major real entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_nalgebra(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return Err(Error::Dimension("matrix has an empty side".into()));
        }
        if inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Contract("matrix has non-finite entries".into()));
        }
        Ok(Self { inner })
    }

    /// Skips the finiteness scan; callers guarantee the invariant.
    pub(crate) fn wrap(inner: DMatrix<C64>) -> Self {
        debug_assert!(inner.nrows() > 0 && inner.ncols() > 0);
        Self { inner }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::wrap(DMatrix::zeros(rows, cols))
    }

    pub fn identity(d: usize) -> Self {
        Self::wrap(DMatrix::identity(d, d))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        Self::wrap(DMatrix::from_fn(d, d, |i, j| if i == j { C64::new(diag[i], 0.0) } else { ZERO }))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self::wrap(DMatrix::from_fn(rows, cols, f))
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("ragged column list".into()));
        }
        Self::from_nalgebra(DMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn into_nalgebra(self) -> DMatrix<C64> {
        self.inner
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.inner[(i, j)]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.inner.column(j).iter().copied().collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::wrap(self.inner.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self::wrap(self.inner.transpose())
    }

    pub fn trace(&self) -> C64 {
        self.inner.diagonal().iter().sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::wrap(&self.inner * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self::wrap(self.inner.map(|z| z * s))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(Self::wrap(&self.inner * &rhs.inner))
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols(), "vector length must match column count");
        let dv = DVector::from_column_slice(v);
        (&self.inner * dv).iter().copied().collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.inner.shape(), other.inner.shape(), "shape mismatch");
        self.inner.iter().zip(other.inner.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::wrap((&self.inner + self.inner.adjoint()).map(|z| z * 0.5))
    }

    /// Column-stacked vectorization.
    pub fn vectorize(&self) -> Vec<C64> {
        // nalgebra storage is column-major, which is exactly column stacking.
        self.inner.as_slice().to_vec()
    }

    /// Inverse of [`ComplexMatrix::vectorize`] for a square `d×d` matrix.
    pub fn unvectorize(d: usize, v: &[C64]) -> Result<Self> {
        if v.len() != d * d || d == 0 {
            return Err(Error::Dimension(format!("vector of length {} is not a {d}x{d} matrix", v.len())));
        }
        Ok(Self::wrap(DMatrix::from_column_slice(d, d, v)))
    }

    /// Hilbert–Schmidt inner product `Tr(A† B)`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        self.inner.iter().zip(other.inner.iter()).map(|(a, b)| a.conj() * b).sum()
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.inner + &rhs.inner)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.inner - &rhs.inner)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.inner * &rhs.inner)
    }
}

/// Which tensor factor of `H_A ⊗ H_B` an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// The pair of factor dimensions of `H_A ⊗ H_B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteSpace {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
}

impl BipartiteSpace {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::Dimension("factor dimensions must be positive".into()));
        }
        match dim_a.checked_mul(dim_b) {
            Some(j) if j <= DIMENSION_CAP => Ok(Self { dim_a, dim_b }),
            _ => Err(Error::Dimension(format!("joint dimension {dim_a}x{dim_b} exceeds cap {DIMENSION_CAP}"))),
        }
    }

    pub fn joint(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn dim(&self, part: Subsystem) -> usize {
        match part {
            Subsystem::A => self.dim_a,
            Subsystem::B => self.dim_b,
        }
    }
}

/// Kronecker product `a ⊗ b` with the default dimension cap.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    tensor_product_with_cap(a, b, DIMENSION_CAP)
}

pub fn tensor_product_with_cap(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= cap && c <= cap => Ok(ComplexMatrix::wrap(a.inner.kronecker(&b.inner))),
        _ => Err(Error::Dimension(format!(
            "tensor product of {}x{} and {}x{} exceeds cap {cap}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        ))),
    }
}

/// Partial trace over one factor of `space`.
pub fn partial_trace(m: &ComplexMatrix, space: BipartiteSpace, over: Subsystem) -> Result<ComplexMatrix> {
    let n = space.joint();
    if m.rows() != n || m.cols() != n {
        return Err(Error::Dimension(format!(
            "partial trace expects {n}x{n} for {}x{} factors, got {}x{}",
            space.dim_a,
            space.dim_b,
            m.rows(),
            m.cols()
        )));
    }
    let (da, db) = (space.dim_a, space.dim_b);
    let out = match over {
        Subsystem::A => DMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m.inner[(k * db + i, k * db + j)]).sum()),
        Subsystem::B => DMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m.inner[(i * db + k, j * db + k)]).sum()),
    };
    Ok(ComplexMatrix::wrap(out))
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, aligned with `values`.
    pub vectors: ComplexMatrix,
}

impl Eigensystem {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.vectors.inner;
        let d = self.values.len();
        let scaled = DMatrix::from_fn(d, d, |i, j| v[(i, j)] * self.values[j]);
        ComplexMatrix::wrap(scaled * v.adjoint())
    }
}

pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<Eigensystem> {
    if !h.is_square() {
        return Err(Error::Contract(format!("eigensystem of non-square {}x{} matrix", h.rows(), h.cols())));
    }
    if !h.is_hermitian(1e-8) {
        return Err(Error::Contract("eigensystem requested for a non-Hermitian matrix".into()));
    }
    let eig = SymmetricEigen::new(h.hermitian_part().inner);
    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(h.dim(), h.dim(), |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Eigensystem { values, vectors: ComplexMatrix::wrap(vectors) })
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = SVD::new(m.inner.clone(), false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Orthonormal basis of the numerical null space of `m`.
///
/// A right-singular direction is kept when its singular value is at most
/// `tol · max(σ_max, 1)`, so a matrix that is zero up to rounding is entirely
/// null. Directions beyond the row count (wide matrices) are always null.
pub fn null_space(m: &ComplexMatrix, tol: f64) -> Vec<Vec<C64>> {
    let (rows, cols) = (m.rows(), m.cols());
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(&m.inner);
        p
    } else {
        m.inner.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let threshold = tol * sigma_max.max(1.0);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold)
        .map(|(k, _)| v_t.row(k).iter().map(|z| z.conj()).collect())
        .collect()
}

/// Unitary matrix on a `dim`-dimensional space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
}

impl TryFrom<ComplexMatrix> for UnitaryOperator {
    type Error = Error;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<UnitaryOperator> for ComplexMatrix {
    fn from(u: UnitaryOperator) -> Self {
        u.matrix
    }
}

impl UnitaryOperator {
    /// Accepts `m` when `m†m = I` within `1e−10` entrywise.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Contract(format!("unitary must be square, got {}x{}", m.rows(), m.cols())));
        }
        let defect = (&m.adjoint() * &m).max_abs_diff(&ComplexMatrix::identity(m.dim()));
        if defect > DEFAULT_TOL {
            return Err(Error::Contract(format!("matrix is not unitary (|U†U − I|max = {defect:e})")));
        }
        Ok(Self { matrix: m })
    }

    pub fn identity(d: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(d) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn compose(&self, then: &Self) -> Result<Self> {
        Ok(Self { matrix: then.matrix.checked_mul(&self.matrix)? })
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self { matrix: tensor_product(&self.matrix, &other.matrix)? })
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.matrix * m) * &self.matrix.adjoint()
    }

    /// `U† ρ U`.
    pub fn conjugate_adjoint(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.matrix.adjoint() * m) * &self.matrix
    }
}

/// Positive semidefinite, unit-trace Hermitian matrix.
///
/// Construction clips eigenvalues in `[−1e−10, 0)` to zero and renormalizes the
/// trace, so long chains of channel applications stay inside the state space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = Error;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(d: DensityMatrix) -> Self {
        d.matrix
    }
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Contract(format!("density matrix must be square, got {}x{}", m.rows(), m.cols())));
        }
        if !m.is_hermitian(DEFAULT_TOL) {
            return Err(Error::Contract("density matrix is not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > DEFAULT_TOL {
            return Err(Error::Contract(format!("density matrix trace is {tr}, expected 1")));
        }
        Self::clip(m.hermitian_part())
    }

    /// Normalizes a nonzero PSD matrix by its trace.
    pub fn from_unnormalized(m: &ComplexMatrix) -> Result<Self> {
        let tr = m.trace().re;
        if !(tr > 0.0) {
            return Err(Error::Contract("cannot normalize a matrix with nonpositive trace".into()));
        }
        Self::new(m.hermitian_part().scale_real(1.0 / tr))
    }

    fn clip(h: ComplexMatrix) -> Result<Self> {
        let eig = hermitian_eigensystem(&h)?;
        let min = eig.values[0];
        if min < -DEFAULT_TOL {
            return Err(Error::Contract(format!("density matrix has negative eigenvalue {min:e}")));
        }
        if min >= 0.0 {
            return Ok(Self { matrix: h });
        }
        let clipped: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let values = clipped.iter().map(|l| l / total).collect();
        let rebuilt = Eigensystem { values, vectors: eig.vectors }.reconstruct().hermitian_part();
        Ok(Self { matrix: rebuilt })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64) }
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::Contract("pure state from the zero vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    /// `|k⟩⟨k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::Dimension(format!("basis index {k} out of range for dimension {d}")));
        }
        let mut diag = vec![0.0; d];
        diag[k] = 1.0;
        Self::from_probabilities(&diag)
    }

    pub fn from_probabilities(p: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diagonal(p))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `Tr(ρ a)`.
    pub fn expectation(&self, a: &ComplexMatrix) -> C64 {
        // Tr(ρ a) = Σ_ij ρ_ij a_ji = ⟨ρ†, a^T⟩ elementwise; ρ is Hermitian.
        let r = self.matrix.as_nalgebra();
        let a = a.as_nalgebra();
        let d = self.dim();
        let mut acc = ZERO;
        for i in 0..d {
            for j in 0..d {
                acc += r[(i, j)] * a[(j, i)];
            }
        }
        acc
    }

    pub fn trace_distance_to(&self, other: &DensityMatrix) -> f64 {
        trace_norm(&(&self.matrix - &other.matrix))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigensystem(&self.matrix).map(|e| e.values[0]).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::random::{random_complex_matrix, random_density, random_hermitian, random_unitary, seeded_rng};

    #[test]
    fn identity_tensor_identity() {
        let p = tensor_product(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)).unwrap();
        assert_eq!(p, ComplexMatrix::identity(6));
    }

    #[test]
    fn projector_product() {
        let p0 = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let p = tensor_product(&p0, &p0).unwrap();
        assert_eq!(p, ComplexMatrix::from_diagonal(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn xx_flips_both_qubits() {
        let x = gates::pauli_x();
        let xx = tensor_product(&x, &x).unwrap();
        // |00⟩ = e_0, |11⟩ = e_3 in A-major ordering.
        let out = xx.apply(&[ONE, ZERO, ZERO, ZERO]);
        assert_eq!(out, vec![ZERO, ZERO, ZERO, ONE]);
    }

    #[test]
    fn tensor_product_respects_cap() {
        let a = ComplexMatrix::identity(3);
        assert!(matches!(tensor_product_with_cap(&a, &a, 8), Err(Error::Dimension(_))));
        assert!(tensor_product_with_cap(&a, &a, 9).is_ok());
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = seeded_rng(1);
        let ra = random_density(2, &mut rng);
        let rb = random_density(3, &mut rng);
        let space = BipartiteSpace::new(2, 3).unwrap();
        let joint = tensor_product(ra.matrix(), rb.matrix()).unwrap();
        assert!(partial_trace(&joint, space, Subsystem::A).unwrap().max_abs_diff(rb.matrix()) < 1e-14);
        assert!(partial_trace(&joint, space, Subsystem::B).unwrap().max_abs_diff(ra.matrix()) < 1e-14);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix::pure(&[C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)]).unwrap();
        let space = BipartiteSpace::new(2, 2).unwrap();
        let m = partial_trace(bell.matrix(), space, Subsystem::B).unwrap();
        assert!(m.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn swap_moves_marginals() {
        // Oracle: explicit 4x4 arithmetic with the SWAP permutation matrix.
        let mut rng = seeded_rng(2);
        let space = BipartiteSpace::new(2, 2).unwrap();
        for _ in 0..10 {
            let ra = random_density(2, &mut rng);
            let rb = random_density(2, &mut rng);
            let joint = tensor_product(ra.matrix(), rb.matrix()).unwrap();
            let sw = gates::swap(2);
            let swapped = &(&sw * &joint) * &sw.adjoint();
            let m = partial_trace(&swapped, space, Subsystem::A).unwrap();
            assert!(m.max_abs_diff(ra.matrix()) < 1e-14);
        }
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let space = BipartiteSpace::new(2, 2).unwrap();
        assert!(matches!(partial_trace(&ComplexMatrix::identity(3), space, Subsystem::A), Err(Error::Dimension(_))));
    }

    #[test]
    fn eigensystem_diagonal_and_pauli() {
        let e = hermitian_eigensystem(&ComplexMatrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        let e = hermitian_eigensystem(&gates::pauli_x()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigensystem_reconstructs_random_hermitian() {
        let mut rng = seeded_rng(3);
        for _ in 0..20 {
            let h = random_hermitian(5, &mut rng);
            let e = hermitian_eigensystem(&h).unwrap();
            let resid = (&h - &e.reconstruct()).frobenius_norm();
            assert!(resid <= 1e-10 * h.frobenius_norm().max(1.0), "residual {resid}");
            let v = &e.vectors;
            let gram = &v.adjoint() * v;
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eigensystem_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eigensystem(&m), Err(Error::Contract(_))));
    }

    #[test]
    fn null_space_cases() {
        assert_eq!(null_space(&ComplexMatrix::zeros(3, 3), 1e-10).len(), 3);
        assert!(null_space(&ComplexMatrix::identity(3), 1e-10).is_empty());
        // Identity channel superoperator is I_4; M − I vanishes.
        let m = &ComplexMatrix::identity(4) - &ComplexMatrix::identity(4);
        assert_eq!(null_space(&m, 1e-10).len(), 4);
    }

    #[test]
    fn null_space_of_rank_deficient_matrix() {
        let mut rng = seeded_rng(4);
        let a = random_complex_matrix(5, 2, &mut rng);
        let b = random_complex_matrix(2, 5, &mut rng);
        let m = &a * &b;
        let ns = null_space(&m, 1e-10);
        assert_eq!(ns.len(), 3);
        let norm = operator_norm(&m);
        for v in &ns {
            let mv = m.apply(v);
            let r = mv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(r <= 1e-10 * norm);
        }
        let basis = ComplexMatrix::from_columns(&ns).unwrap();
        assert!((&basis.adjoint() * &basis).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = ComplexMatrix::from_real(1, 3, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(null_space(&m, 1e-10).len(), 2);
    }

    #[test]
    fn operator_norm_cases() {
        assert!((operator_norm(&ComplexMatrix::identity(4)) - 1.0).abs() < 1e-14);
        assert!((operator_norm(&ComplexMatrix::from_diagonal(&[2.0, -3.0])) - 3.0).abs() < 1e-14);
        let mut rng = seeded_rng(5);
        for _ in 0..10 {
            let m = random_complex_matrix(4, 4, &mut rng);
            let gram = &m.adjoint() * &m;
            let top = *hermitian_eigensystem(&gram).unwrap().values.last().unwrap();
            let n = operator_norm(&m);
            assert!((n - top.sqrt()).abs() <= 1e-10 * n);
        }
    }

    #[test]
    fn unitaries_have_unit_norm() {
        let mut rng = seeded_rng(6);
        for d in 1..6 {
            let u = random_unitary(d, &mut rng);
            assert!((operator_norm(u.matrix()) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.5, 0.6])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_diagonal(&[1.5, -0.5])).is_err());
        let clipped = DensityMatrix::new(ComplexMatrix::from_diagonal(&[1.0 + 5e-11, -5e-11])).unwrap();
        assert!(clipped.min_eigenvalue() >= 0.0);
        assert!((clipped.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitary_validation() {
        assert!(UnitaryOperator::new(ComplexMatrix::from_diagonal(&[1.0, 2.0])).is_err());
        assert!(UnitaryOperator::new(gates::cnot()).is_ok());
    }

    #[test]
    fn matrix_json_shape_is_row_major() {
        let m = ComplexMatrix::new(1, 2, vec![C64::new(1.0, 2.0), C64::new(3.0, -4.0)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":2,"data":[[1.0,2.0],[3.0,-4.0]]}"#);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#).is_err());
    }

    #[test]
    fn vectorization_is_column_stacking() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let v: Vec<f64> = m.vectorize().iter().map(|z| z.re).collect();
        assert_eq!(v, vec![1.0, 3.0, 2.0, 4.0]);
        assert_eq!(ComplexMatrix::unvectorize(2, &m.vectorize()).unwrap(), m);
    }
}
