//! Dense complex linear algebra: tensor products, partial transpose and
//! trace, Hermitian eigendecomposition, SVD-based rank and Schmidt
//! decomposition.
//!
//! Bipartite vectors are indexed so that `v[i * dim_b + j]` is the
//! coefficient of `e_i ⊗ f_j` (left factor varies slowest). The same
//! ordering is used for the rows and columns of bipartite operators.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};

pub type C64 = Complex64;
pub type CVector = DVector<C64>;

/// Default cap on the dimension of any tensor product the toolkit builds.
pub const DEFAULT_TENSOR_CAP: usize = 4096;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Relative tolerances shared by all exact tests.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub psd: f64,
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: 1e-10,
            psd: 1e-9,
            rank: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn strict() -> Self {
        Tolerances {
            hermiticity: 1e-12,
            psd: 1e-11,
            rank: 1e-11,
        }
    }
}

/// Dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        ComplexMatrix(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(ConeError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ConeError::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(ComplexMatrix(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// Real matrix from row-major entries. Panics on a length mismatch, so
    /// only use it for literals.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "literal has wrong length");
        ComplexMatrix::from_fn(rows, cols, |i, j| C64::new(entries[i * cols + j], 0.0))
    }

    pub fn diag_real(diag: &[f64]) -> Self {
        let n = diag.len();
        ComplexMatrix::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { ZERO })
    }

    /// Matrix unit `e_i e_j*` of shape `rows x cols`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = ComplexMatrix::zeros(rows, cols);
        m[(i, j)] = ONE;
        m
    }

    /// Outer product `u v*`.
    pub fn outer(u: &CVector, v: &CVector) -> Self {
        ComplexMatrix(u * v.adjoint())
    }

    /// Column vector as an `n x 1` matrix.
    pub fn column(v: &CVector) -> Self {
        ComplexMatrix(DMatrix::from_column_slice(v.len(), 1, v.as_slice()))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        ComplexMatrix(self.0.transpose())
    }

    pub fn conjugate(&self) -> Self {
        ComplexMatrix(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, alpha: f64) -> Self {
        ComplexMatrix(self.0.map(|z| z * alpha))
    }

    pub fn scale_complex(&self, alpha: C64) -> Self {
        ComplexMatrix(self.0.map(|z| z * alpha))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        singular_values(self).first().copied().unwrap_or(0.0)
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        &self.0 * v
    }

    /// `v* M v` for square `M`.
    pub fn quadratic_form(&self, v: &CVector) -> C64 {
        v.dotc(&(&self.0 * v))
    }

    pub fn entries_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    /// Relative Frobenius distance `‖self - other‖ / max(1, ‖other‖)`.
    pub fn rel_distance(&self, other: &ComplexMatrix) -> f64 {
        (self - other).frobenius_norm() / other.frobenius_norm().max(1.0)
    }

    /// Sub-block `[r0..r0+nr, c0..c0+nc]`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        ComplexMatrix(self.0.view((r0, c0), (nr, nc)).into_owned())
    }
}

impl From<DMatrix<C64>> for ComplexMatrix {
    fn from(m: DMatrix<C64>) -> Self {
        ComplexMatrix(m)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.0[idx]
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0.$method(rhs.0))
            }
        }
        impl $trait<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Row-major JSON layout: `{"rows", "cols", "re": [[..]], "im": [[..]]}`.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let re = (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self[(i, j)].re).collect())
            .collect();
        let im = (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self[(i, j)].im).collect())
            .collect();
        MatrixJson {
            rows: self.rows(),
            cols: self.cols(),
            re,
            im,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = MatrixJson::deserialize(d)?;
        if raw.re.len() != raw.rows || raw.im.len() != raw.rows {
            return Err(D::Error::custom("row count does not match `rows`"));
        }
        let mut entries = Vec::with_capacity(raw.rows * raw.cols);
        for (re_row, im_row) in raw.re.iter().zip(&raw.im) {
            if re_row.len() != raw.cols || im_row.len() != raw.cols {
                return Err(D::Error::custom("row length does not match `cols`"));
            }
            entries.extend(re_row.iter().zip(im_row).map(|(&r, &i)| C64::new(r, i)));
        }
        ComplexMatrix::from_row_major(raw.rows, raw.cols, entries).map_err(D::Error::custom)
    }
}

/// Square matrix that is Hermitian within the hermiticity tolerance. The
/// stored matrix is the exact Hermitian part of the input.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(ConeError::DimensionMismatch(format!(
                "Hermitian operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let norm = matrix.frobenius_norm();
        let skew = (&matrix - &matrix.adjoint()).frobenius_norm();
        let deviation = if norm > 0.0 { skew / norm } else { 0.0 };
        if deviation > tol {
            return Err(ConeError::NonHermitian {
                deviation,
                tolerance: tol,
            });
        }
        let herm = if skew == 0.0 {
            matrix
        } else {
            (&matrix + &matrix.adjoint()).scale(0.5)
        };
        Ok(HermitianOperator { matrix: herm })
    }

    /// Hermiticity check with the default tolerance.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(matrix, Tolerances::default().hermiticity)
    }

    pub fn identity(n: usize) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::identity(n),
        }
    }

    /// Rank-one projector `v v*` (unnormalized).
    pub fn projector(v: &CVector) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::outer(v, v),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        HermitianOperator::from_matrix(m).map_err(serde::de::Error::custom)
    }
}

/// Which tensor factor of a bipartite space an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Hermitian operator on `H_{dimA} ⊗ H_{dimB}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BipartiteOperator {
    #[serde(rename = "dimA")]
    dim_a: usize,
    #[serde(rename = "dimB")]
    dim_b: usize,
    #[serde(rename = "matrix")]
    op: HermitianOperator,
}

impl BipartiteOperator {
    pub fn new(dim_a: usize, dim_b: usize, op: HermitianOperator) -> Result<Self> {
        if op.dim() != dim_a * dim_b {
            return Err(ConeError::DimensionMismatch(format!(
                "operator of dimension {} on a {dim_a}x{dim_b} space",
                op.dim()
            )));
        }
        Ok(BipartiteOperator { dim_a, dim_b, op })
    }

    pub fn from_matrix(dim_a: usize, dim_b: usize, m: ComplexMatrix, tol: f64) -> Result<Self> {
        Self::new(dim_a, dim_b, HermitianOperator::new(m, tol)?)
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn trace(&self) -> f64 {
        self.op.trace()
    }
}

#[derive(Deserialize)]
struct BipartiteJson {
    #[serde(rename = "dimA")]
    dim_a: usize,
    #[serde(rename = "dimB")]
    dim_b: usize,
    matrix: HermitianOperator,
}

impl<'de> Deserialize<'de> for BipartiteOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BipartiteJson::deserialize(d)?;
        BipartiteOperator::new(raw.dim_a, raw.dim_b, raw.matrix).map_err(serde::de::Error::custom)
    }
}

/// Kronecker product with the default dimension cap.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    tensor_with_cap(a, b, DEFAULT_TENSOR_CAP)
}

pub fn tensor_with_cap(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= cap && c <= cap => Ok(ComplexMatrix(a.0.kronecker(&b.0))),
        _ => Err(ConeError::DimensionCap {
            requested: a.rows().saturating_mul(b.rows()).max(a.cols().saturating_mul(b.cols())),
            cap,
        }),
    }
}

/// `x ⊗ y` for vectors.
pub fn kron_vec(x: &CVector, y: &CVector) -> CVector {
    CVector::from_fn(x.len() * y.len(), |idx, _| x[idx / y.len()] * y[idx % y.len()])
}

/// Standard basis vector.
pub fn ket(dim: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[i] = ONE;
    v
}

/// Blockwise transpose on the named factor.
pub fn partial_transpose(x: &BipartiteOperator, subsystem: Subsystem) -> BipartiteOperator {
    let (da, db) = (x.dim_a, x.dim_b);
    let m = partial_transpose_matrix(x.matrix(), da, db, subsystem);
    BipartiteOperator {
        dim_a: da,
        dim_b: db,
        op: HermitianOperator { matrix: m },
    }
}

/// Partial transpose of an arbitrary square matrix on `H_da ⊗ H_db`.
pub fn partial_transpose_matrix(m: &ComplexMatrix, da: usize, db: usize, subsystem: Subsystem) -> ComplexMatrix {
    ComplexMatrix::from_fn(da * db, da * db, |r, c| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (c / db, c % db);
        match subsystem {
            Subsystem::A => m[(j * db + k, i * db + l)],
            Subsystem::B => m[(i * db + l, j * db + k)],
        }
    })
}

/// Trace over the named factor; the result lives on the other factor.
pub fn partial_trace(x: &BipartiteOperator, subsystem: Subsystem) -> HermitianOperator {
    HermitianOperator {
        matrix: partial_trace_matrix(x.matrix(), x.dim_a, x.dim_b, subsystem),
    }
}

pub fn partial_trace_matrix(m: &ComplexMatrix, da: usize, db: usize, subsystem: Subsystem) -> ComplexMatrix {
    match subsystem {
        Subsystem::B => ComplexMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Subsystem::A => ComplexMatrix::from_fn(db, db, |k, l| (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()),
    }
}

/// Eigenvalues in descending order with matching orthonormal eigenvector
/// columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn min_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, idx: usize) -> CVector {
        self.vectors.0.column(idx).into_owned()
    }

    /// Eigenvector of the smallest eigenvalue.
    pub fn min_vector(&self) -> CVector {
        self.vector(self.values.len() - 1)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let d = DMatrix::from_fn(n, n, |i, j| if i == j { C64::new(self.values[i], 0.0) } else { ZERO });
        ComplexMatrix(&self.vectors.0 * d * self.vectors.0.adjoint())
    }
}

pub fn eig_hermitian(h: &HermitianOperator) -> EigenDecomposition {
    eig_hermitian_unchecked(h.matrix())
}

/// Eigendecomposition of a matrix the caller knows to be Hermitian.
pub(crate) fn eig_hermitian_unchecked(m: &ComplexMatrix) -> EigenDecomposition {
    let n = m.rows();
    if n == 0 {
        return EigenDecomposition {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        };
    }
    let eig = SymmetricEigen::new(m.0.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    EigenDecomposition {
        values,
        vectors: ComplexMatrix(vectors),
    }
}

/// Result of a PSD test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    pub min_eigenvalue: f64,
}

/// PSD iff the smallest eigenvalue is at least `-tol * max(1, ‖H‖₂)`.
pub fn is_psd(h: &HermitianOperator, tol: f64) -> PsdCheck {
    let eig = eig_hermitian(h);
    psd_from_eig(&eig, tol)
}

pub(crate) fn psd_from_eig(eig: &EigenDecomposition, tol: f64) -> PsdCheck {
    let min = eig.min_value();
    let norm = eig.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    PsdCheck {
        psd: min >= -tol * norm.max(1.0),
        min_eigenvalue: min,
    }
}

/// Singular values, descending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return vec![];
    }
    to_faer(m).singular_values().expect("SVD converges")
}

/// Thin SVD `M = U diag(s) V*` with singular values descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

// nalgebra's complex SVD returns inconsistent factors on some
// rank-deficient inputs, so SVDs go through faer.
fn to_faer(m: &ComplexMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.rows(), m.cols(), |i, j| m.0[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> ComplexMatrix {
    ComplexMatrix(DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]))
}

pub fn svd(m: &ComplexMatrix) -> Svd {
    let k = m.rows().min(m.cols());
    if k == 0 {
        return Svd {
            u: ComplexMatrix::zeros(m.rows(), 0),
            singular_values: vec![],
            v: ComplexMatrix::zeros(m.cols(), 0),
        };
    }
    let s = to_faer(m).thin_svd().expect("SVD converges");
    let diag = s.S().column_vector();
    Svd {
        u: from_faer(s.U()),
        singular_values: (0..k).map(|i| diag[i].re).collect(),
        v: from_faer(s.V()),
    }
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn numerical_rank(m: &ComplexMatrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > rel_tol * top).count(),
        _ => 0,
    }
}

/// Orthogonal projection onto the column space (range).
pub fn range_projection(m: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    let r = numerical_rank(m, rel_tol);
    let s = svd(m);
    projector_onto_columns(&s.u, r)
}

/// Orthogonal projection onto the row space (orthocomplement of the kernel).
pub fn support_projection(m: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    let r = numerical_rank(m, rel_tol);
    let s = svd(m);
    projector_onto_columns(&s.v, r)
}

fn projector_onto_columns(basis: &ComplexMatrix, count: usize) -> ComplexMatrix {
    let q = basis.0.columns(0, count);
    ComplexMatrix(q * q.adjoint())
}

/// Schmidt decomposition `v = Σ_j c_j · left_j ⊗ right_j`.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left: Vec<CVector>,
    pub right: Vec<CVector>,
}

impl SchmidtDecomposition {
    pub fn rank(&self, rel_tol: f64) -> usize {
        match self.coefficients.first() {
            Some(&top) if top > 0.0 => self.coefficients.iter().filter(|&&c| c > rel_tol * top).count(),
            _ => 0,
        }
    }

    pub fn reconstruct(&self, dim_a: usize, dim_b: usize) -> CVector {
        let mut v = CVector::zeros(dim_a * dim_b);
        for ((c, l), r) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            v += kron_vec(l, r) * C64::new(*c, 0.0);
        }
        v
    }

    /// Keeps the `k` leading terms.
    pub fn truncated(&self, k: usize) -> SchmidtDecomposition {
        SchmidtDecomposition {
            coefficients: self.coefficients.iter().take(k).copied().collect(),
            left: self.left.iter().take(k).cloned().collect(),
            right: self.right.iter().take(k).cloned().collect(),
        }
    }
}

/// Reshape of a bipartite vector into its `dim_a x dim_b` coefficient matrix.
pub fn reshape_vector(v: &CVector, dim_a: usize, dim_b: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim_a, dim_b, |i, j| v[i * dim_b + j])
}

/// Inverse of [`reshape_vector`].
pub fn flatten_matrix(m: &ComplexMatrix) -> CVector {
    let cols = m.cols();
    CVector::from_fn(m.rows() * cols, |idx, _| m[(idx / cols, idx % cols)])
}

/// Full-length Schmidt decomposition (`min(dim_a, dim_b)` terms, some
/// possibly zero). A zero vector yields an empty decomposition.
pub fn schmidt_decompose(v: &CVector, dim_a: usize, dim_b: usize) -> Result<SchmidtDecomposition> {
    if v.len() != dim_a * dim_b {
        return Err(ConeError::DimensionMismatch(format!(
            "vector of length {} on a {dim_a}x{dim_b} space",
            v.len()
        )));
    }
    if v.iter().all(|z| *z == ZERO) {
        return Ok(SchmidtDecomposition {
            coefficients: vec![],
            left: vec![],
            right: vec![],
        });
    }
    let s = svd(&reshape_vector(v, dim_a, dim_b));
    let terms = s.singular_values.len();
    Ok(SchmidtDecomposition {
        coefficients: s.singular_values.clone(),
        left: (0..terms).map(|t| s.u.0.column(t).into_owned()).collect(),
        // M = U S V*  ⇒  v = Σ s_t u_t ⊗ conj(v_t)
        right: (0..terms).map(|t| s.v.0.column(t).map(|z| z.conj())).collect(),
    })
}

/// Orthonormalizes `vectors` in order by modified Gram-Schmidt, dropping
/// vectors that are numerically dependent.
pub fn orthonormalize(vectors: &[CVector], tol: f64) -> Vec<CVector> {
    let mut out: Vec<CVector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for q in &out {
            let proj = q.dotc(&w);
            w -= q * proj;
        }
        let n = w.norm();
        if n > tol {
            out.push(w / C64::new(n, 0.0));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        })
    }

    fn hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianOperator {
        let g = gaussian(n, n, rng);
        HermitianOperator::from_matrix((&g + &g.adjoint()).scale(0.5)).unwrap()
    }

    fn sigma1() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0., 1., 1., 0.])
    }

    fn sigma2() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => C64::new(0., -1.),
            (1, 0) => C64::new(0., 1.),
            _ => ZERO,
        })
    }

    fn swap(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n * n, n * n, |r, c| {
            if c == (r % n) * n + r / n {
                ONE
            } else {
                ZERO
            }
        })
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn tensor_has_kronecker_blocks() {
        let t = tensor(&sigma1(), &sigma2()).unwrap();
        assert_eq!(t.block(0, 2, 2, 2), sigma2());
        assert_eq!(t.block(2, 0, 2, 2), sigma2());
        assert_eq!(t.block(0, 0, 2, 2), ComplexMatrix::zeros(2, 2));
    }

    #[test]
    fn tensor_acts_on_product_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = gaussian(2, 3, &mut rng);
        let b = gaussian(3, 2, &mut rng);
        let x = gaussian(3, 1, &mut rng).into_inner().column(0).into_owned();
        let y = gaussian(2, 1, &mut rng).into_inner().column(0).into_owned();
        let ab = tensor(&a, &b).unwrap();
        assert_eq!((ab.rows(), ab.cols()), (6, 6));
        let lhs = ab.mul_vec(&kron_vec(&x, &y));
        let rhs = kron_vec(&a.mul_vec(&x), &b.mul_vec(&y));
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn tensor_respects_cap() {
        let big = ComplexMatrix::identity(100);
        assert!(matches!(tensor(&big, &big), Err(ConeError::DimensionCap { .. })));
    }

    #[test]
    fn partial_transpose_of_maximally_entangled_is_half_swap() {
        let omega = ket(4, 0) + ket(4, 3);
        let rho = BipartiteOperator::new(2, 2, HermitianOperator::projector(&(omega * C64::new(0.5f64.sqrt(), 0.0)))).unwrap();
        let pt = partial_transpose(&rho, Subsystem::B);
        assert!(pt.matrix().rel_distance(&swap(2).scale(0.5)) < 1e-15);
        let eig = eig_hermitian(pt.op());
        assert!((eig.values[0] - 0.5).abs() < 1e-12);
        assert!((eig.min_value() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_on_product_transposes_one_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let y = hermitian(2, &mut rng);
        let z = hermitian(3, &mut rng);
        let yz = BipartiteOperator::from_matrix(2, 3, tensor(y.matrix(), z.matrix()).unwrap(), 1e-10).unwrap();
        let got = partial_transpose(&yz, Subsystem::B);
        let want = tensor(y.matrix(), &z.matrix().transpose()).unwrap();
        assert!(got.matrix().rel_distance(&want) < 1e-15);
        assert_eq!(partial_transpose(&got, Subsystem::B), yz);
    }

    #[test]
    fn partial_trace_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let y = hermitian(2, &mut rng);
        let z = hermitian(3, &mut rng);
        let yz = BipartiteOperator::from_matrix(2, 3, tensor(y.matrix(), z.matrix()).unwrap(), 1e-10).unwrap();
        let tr_b = partial_trace(&yz, Subsystem::B);
        assert!(tr_b.matrix().rel_distance(&y.matrix().scale_complex(z.matrix().trace())) < 1e-12);

        let iz = BipartiteOperator::from_matrix(3, 3, tensor(&ComplexMatrix::identity(3), z.matrix()).unwrap(), 1e-10).unwrap();
        let tr_a = partial_trace(&iz, Subsystem::A);
        assert!(tr_a.matrix().rel_distance(&z.matrix().scale(3.0)) < 1e-14);

        let x = BipartiteOperator::new(3, 3, hermitian(9, &mut rng)).unwrap();
        for s in [Subsystem::A, Subsystem::B] {
            assert!((partial_trace(&x, s).trace() - x.trace()).abs() < 1e-12);
        }
    }

    #[test]
    fn eig_known_spectra() {
        let i3 = eig_hermitian(&HermitianOperator::identity(3));
        assert_eq!(i3.values, vec![1.0, 1.0, 1.0]);
        let s1 = eig_hermitian(&HermitianOperator::from_matrix(sigma1()).unwrap());
        assert!((s1.values[0] - 1.0).abs() < 1e-14 && (s1.values[1] + 1.0).abs() < 1e-14);
        let asym = HermitianOperator::from_matrix(ComplexMatrix::identity(4) - swap(2)).unwrap();
        let e = eig_hermitian(&asym);
        assert!((e.values[0] - 2.0).abs() < 1e-14);
        assert!(e.values[1..].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = ComplexMatrix::from_real(2, 2, &[1., 1., 0., 1.]);
        assert!(matches!(HermitianOperator::from_matrix(m), Err(ConeError::NonHermitian { .. })));
    }

    #[test]
    fn psd_checks() {
        let ok = is_psd(&HermitianOperator::identity(3), 1e-9);
        assert!(ok.psd && ok.min_eigenvalue == 1.0);
        let bad = is_psd(&HermitianOperator::from_matrix(ComplexMatrix::diag_real(&[1.0, -0.5])).unwrap(), 1e-9);
        assert!(!bad.psd);
        assert!((bad.min_eigenvalue + 0.5).abs() < 1e-15);
    }

    #[test]
    fn schmidt_cases() {
        let x = CVector::from_vec(vec![C64::new(1., 0.), C64::new(2., 1.)]);
        let y = CVector::from_vec(vec![C64::new(0., 1.), C64::new(1., 0.), C64::new(-1., 0.)]);
        let sd = schmidt_decompose(&kron_vec(&x, &y), 2, 3).unwrap();
        assert_eq!(sd.rank(1e-12), 1);
        assert!((sd.coefficients[0] - x.norm() * y.norm()).abs() < 1e-12);

        let anti = kron_vec(&ket(2, 0), &ket(2, 1)) - kron_vec(&ket(2, 1), &ket(2, 0));
        let sd = schmidt_decompose(&anti, 2, 2).unwrap();
        assert!((sd.coefficients[0] - 1.0).abs() < 1e-14 && (sd.coefficients[1] - 1.0).abs() < 1e-14);

        let zero = schmidt_decompose(&CVector::zeros(4), 2, 2).unwrap();
        assert!(zero.coefficients.is_empty());
        assert!(schmidt_decompose(&CVector::zeros(5), 2, 2).is_err());
    }

    #[test]
    fn rank_cases() {
        assert_eq!(numerical_rank(&ComplexMatrix::zeros(3, 3), 1e-9), 0);
        assert_eq!(numerical_rank(&ComplexMatrix::diag_real(&[1.0, 1e-15]), 1e-9), 1);
        let v = ComplexMatrix::from_real(3, 3, &[0., 1., 0., 0., 0., 0., 1., 0., 0.]);
        assert_eq!(numerical_rank(&v, 1e-9), 2);
    }

    #[test]
    fn projections_are_idempotent() {
        let v = ComplexMatrix::from_real(3, 3, &[0., 1., 0., 0., 0., 0., 1., 0., 0.]);
        let r = range_projection(&v, 1e-9);
        assert!(r.rel_distance(&ComplexMatrix::diag_real(&[1., 0., 1.])) < 1e-14);
        let s = support_projection(&v, 1e-9);
        assert!(s.rel_distance(&ComplexMatrix::diag_real(&[1., 1., 0.])) < 1e-14);
    }

    #[test]
    fn matrix_json_round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = gaussian(3, 2, &mut rng).scale(1.0 / 3.0);
        let text = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        for (a, b) in m.entries_row_major().iter().zip(back.entries_row_major()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"rows":1,"cols":2,"re":[[1]],"im":[[0]]}"#).is_err());
    }
}
