//! Linear maps `L(H_n) → L(H_m)` stored by their Choi matrix.
//!
//! Choi convention: `C_Φ = Σ_{i,j} e_i e_j* ⊗ Φ(e_i e_j*)`, input factor
//! first. In index form `C[(i·m + k), (j·m + l)] = Φ(e_i e_j*)[k, l]`, so
//!
//! * `Φ(X)[k, l] = Σ_{i,j} X[i, j] · C[(i,k), (j,l)]`,
//! * `Φ∘t` is the partial transpose of `C` on the input factor,
//! * `t∘Φ` is the partial transpose on the output factor,
//! * `t∘Φ∘t` is the full transpose of `C`,
//! * `Ad_A∘Φ∘Ad_B` has Choi matrix `(Bᵗ ⊗ A) C (Bᵗ ⊗ A)*`.
//!
//! Every other leg manipulation in the crate is derived from these rules.

use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};
use crate::linops::{
    eig_hermitian, numerical_rank, partial_transpose, BipartiteOperator, ComplexMatrix, CVector,
    HermitianOperator, Subsystem, Tolerances, C64, DEFAULT_TENSOR_CAP, ZERO,
};

/// Hermiticity-preserving linear map in Choi form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearMap {
    #[serde(rename = "dimIn")]
    dim_in: usize,
    #[serde(rename = "dimOut")]
    dim_out: usize,
    #[serde(serialize_with = "serialize_choi")]
    choi: BipartiteOperator,
}

fn serialize_choi<S: serde::Serializer>(c: &BipartiteOperator, s: S) -> std::result::Result<S::Ok, S::Error> {
    c.matrix().serialize(s)
}

#[derive(Deserialize)]
struct MapJson {
    #[serde(rename = "dimIn")]
    dim_in: usize,
    #[serde(rename = "dimOut")]
    dim_out: usize,
    choi: ComplexMatrix,
}

impl<'de> Deserialize<'de> for LinearMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MapJson::deserialize(d)?;
        LinearMap::from_choi_matrix(raw.dim_in, raw.dim_out, raw.choi, Tolerances::default().hermiticity)
            .map_err(serde::de::Error::custom)
    }
}

/// `map_from_choi`: the map whose Choi matrix is `choi`.
pub fn map_from_choi(choi: BipartiteOperator) -> LinearMap {
    LinearMap {
        dim_in: choi.dim_a(),
        dim_out: choi.dim_b(),
        choi,
    }
}

/// `choi_of`: the stored Choi matrix.
pub fn choi_of(map: &LinearMap) -> &BipartiteOperator {
    &map.choi
}

impl LinearMap {
    pub fn from_choi_matrix(dim_in: usize, dim_out: usize, choi: ComplexMatrix, tol: f64) -> Result<Self> {
        Ok(map_from_choi(BipartiteOperator::from_matrix(dim_in, dim_out, choi, tol)?))
    }

    /// Assembles the Choi matrix from an action rule evaluated on matrix
    /// units. Fails if the rule is not Hermiticity-preserving.
    pub fn from_action(dim_in: usize, dim_out: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        let size = dim_in * dim_out;
        if size > DEFAULT_TENSOR_CAP {
            return Err(ConeError::DimensionCap {
                requested: size,
                cap: DEFAULT_TENSOR_CAP,
            });
        }
        let mut c = ComplexMatrix::zeros(size, size);
        for i in 0..dim_in {
            for j in 0..dim_in {
                let out = f(&ComplexMatrix::unit(dim_in, dim_in, i, j));
                if out.rows() != dim_out || out.cols() != dim_out {
                    return Err(ConeError::DimensionMismatch(format!(
                        "action produced {}x{}, expected {dim_out}x{dim_out}",
                        out.rows(),
                        out.cols()
                    )));
                }
                for k in 0..dim_out {
                    for l in 0..dim_out {
                        c[(i * dim_out + k, j * dim_out + l)] = out[(k, l)];
                    }
                }
            }
        }
        Self::from_choi_matrix(dim_in, dim_out, c, Tolerances::default().hermiticity)
    }

    /// Internal constructor for matrices that are Hermitian by construction
    /// up to rounding.
    fn from_exact(dim_in: usize, dim_out: usize, c: ComplexMatrix) -> Self {
        Self::from_choi_matrix(dim_in, dim_out, c, 1e-8).expect("Hermiticity-preserving by construction")
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn choi(&self) -> &BipartiteOperator {
        &self.choi
    }

    pub fn choi_matrix(&self) -> &ComplexMatrix {
        self.choi.matrix()
    }

    /// `Φ(X)`, defined for every `dim_in x dim_in` matrix.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim_in || x.cols() != self.dim_in {
            return Err(ConeError::DimensionMismatch(format!(
                "map takes {n}x{n} input, got {}x{}",
                x.rows(),
                x.cols(),
                n = self.dim_in
            )));
        }
        let (n, m) = (self.dim_in, self.dim_out);
        let c = self.choi_matrix();
        let mut out = ComplexMatrix::zeros(m, m);
        for i in 0..n {
            for j in 0..n {
                let xij = x[(i, j)];
                if xij == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[(k, l)] += xij * c[(i * m + k, j * m + l)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies the map to a Hermitian operator.
    pub fn apply_hermitian(&self, x: &HermitianOperator) -> Result<HermitianOperator> {
        HermitianOperator::new(self.apply(x.matrix())?, 1e-8)
    }

    /// `(id_d ⊗ Φ)(X)` for `X` on `C^d ⊗ C^{dim_in}`, applied block by block.
    pub fn apply_on_second_factor(&self, x: &BipartiteOperator) -> Result<ComplexMatrix> {
        if x.dim_b() != self.dim_in {
            return Err(ConeError::DimensionMismatch(format!(
                "map acts on L(H_{}) but the second factor has dimension {}",
                self.dim_in,
                x.dim_b()
            )));
        }
        let (d, n, m) = (x.dim_a(), self.dim_in, self.dim_out);
        let mut out = ComplexMatrix::zeros(d * m, d * m);
        for a in 0..d {
            for b in 0..d {
                let y = self.apply(&x.matrix().block(a * n, b * n, n, n))?;
                for k in 0..m {
                    for l in 0..m {
                        out[(a * m + k, b * m + l)] = y[(k, l)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Block `(i, j)` of the Choi matrix, i.e. `Φ(e_i e_j*)`.
    pub fn image_of_unit(&self, i: usize, j: usize) -> ComplexMatrix {
        let m = self.dim_out;
        self.choi_matrix().block(i * m, j * m, m, m)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if inner.dim_out != self.dim_in {
            return Err(ConeError::DimensionMismatch(format!(
                "cannot compose a map on L(H_{}) after one into L(H_{})",
                self.dim_in, inner.dim_out
            )));
        }
        let (n, m) = (inner.dim_in, self.dim_out);
        let mut c = ComplexMatrix::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                let out = self.apply(&inner.image_of_unit(i, j))?;
                for k in 0..m {
                    for l in 0..m {
                        c[(i * m + k, j * m + l)] = out[(k, l)];
                    }
                }
            }
        }
        Ok(LinearMap::from_exact(n, m, c))
    }

    /// `self ⊗ other : L(H_{n1} ⊗ H_{n2}) → L(H_{m1} ⊗ H_{m2})`.
    pub fn tensor(&self, other: &LinearMap) -> Result<LinearMap> {
        let (n1, m1, n2, m2) = (self.dim_in, self.dim_out, other.dim_in, other.dim_out);
        let (n, m) = (n1 * n2, m1 * m2);
        if n * m > DEFAULT_TENSOR_CAP {
            return Err(ConeError::DimensionCap {
                requested: n * m,
                cap: DEFAULT_TENSOR_CAP,
            });
        }
        let (ca, cb) = (self.choi_matrix(), other.choi_matrix());
        let c = ComplexMatrix::from_fn(n * m, n * m, |r, s| {
            let (i, k) = (r / m, r % m);
            let (j, l) = (s / m, s % m);
            let (i1, i2) = (i / n2, i % n2);
            let (j1, j2) = (j / n2, j % n2);
            let (k1, k2) = (k / m2, k % m2);
            let (l1, l2) = (l / m2, l % m2);
            ca[(i1 * m1 + k1, j1 * m1 + l1)] * cb[(i2 * m2 + k2, j2 * m2 + l2)]
        });
        Ok(LinearMap::from_exact(n, m, c))
    }

    /// Hilbert-Schmidt dual: `Tr(Φ(X) Y) = Tr(X Φ†(Y))`.
    pub fn dual(&self) -> LinearMap {
        let (n, m) = (self.dim_in, self.dim_out);
        let c = self.choi_matrix();
        // D[(l, j), (k, i)] = C[(i, k), (j, l)]
        let d = ComplexMatrix::from_fn(n * m, n * m, |r, s| {
            let (l, j) = (r / n, r % n);
            let (k, i) = (s / n, s % n);
            c[(i * m + k, j * m + l)]
        });
        LinearMap::from_exact(m, n, d)
    }

    /// `Φ∘t`.
    pub fn pre_transpose(&self) -> LinearMap {
        map_from_choi(partial_transpose(&self.choi, Subsystem::A))
    }

    /// `t∘Φ`.
    pub fn post_transpose(&self) -> LinearMap {
        map_from_choi(partial_transpose(&self.choi, Subsystem::B))
    }

    /// `t∘Φ∘t`.
    pub fn transpose_conjugate(&self) -> LinearMap {
        LinearMap::from_exact(self.dim_in, self.dim_out, self.choi_matrix().transpose())
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap> {
        self.check_same_shape(other)?;
        Ok(LinearMap::from_exact(
            self.dim_in,
            self.dim_out,
            self.choi_matrix() + other.choi_matrix(),
        ))
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap> {
        self.check_same_shape(other)?;
        Ok(LinearMap::from_exact(
            self.dim_in,
            self.dim_out,
            self.choi_matrix() - other.choi_matrix(),
        ))
    }

    pub fn scale(&self, alpha: f64) -> LinearMap {
        LinearMap::from_exact(self.dim_in, self.dim_out, self.choi_matrix().scale(alpha))
    }

    pub fn check_same_shape(&self, other: &LinearMap) -> Result<()> {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return Err(ConeError::DimensionMismatch(format!(
                "maps L(H_{})→L(H_{}) and L(H_{})→L(H_{})",
                self.dim_in, self.dim_out, other.dim_in, other.dim_out
            )));
        }
        Ok(())
    }

    /// Relative Frobenius distance between Choi matrices.
    pub fn distance(&self, other: &LinearMap) -> f64 {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return f64::INFINITY;
        }
        self.choi_matrix().rel_distance(other.choi_matrix())
    }

    /// Kraus operators from the scaled eigenvectors of the Choi matrix.
    pub fn kraus(&self, tol: f64) -> Result<KrausDecomposition> {
        kraus_from_choi(self, tol)
    }
}

/// `Ad_A(X) = A X A*` for `A` of shape `m x n`.
pub fn adjoint_map(a: &ComplexMatrix) -> LinearMap {
    let v = kraus_vector(a);
    let c = ComplexMatrix::outer(&v, &v);
    LinearMap::from_exact(a.cols(), a.rows(), c)
}

/// The vector `Σ_i e_i ⊗ A e_i` whose projector is `C_{Ad_A}`.
pub fn kraus_vector(a: &ComplexMatrix) -> CVector {
    let (m, n) = (a.rows(), a.cols());
    CVector::from_fn(n * m, |idx, _| a[(idx % m, idx / m)])
}

/// Inverse of [`kraus_vector`].
pub fn kraus_operator_from_vector(v: &CVector, dim_in: usize, dim_out: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim_out, dim_in, |k, i| v[i * dim_out + k])
}

/// Family `{A_i}` representing `Σ_i Ad_{A_i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrausDecomposition {
    pub operators: Vec<ComplexMatrix>,
    pub ranks: Vec<usize>,
}

impl KrausDecomposition {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_rank_tol(operators, Tolerances::default().rank)
    }

    pub fn with_rank_tol(operators: Vec<ComplexMatrix>, rank_tol: f64) -> Result<Self> {
        if let Some(first) = operators.first() {
            if operators.iter().any(|a| a.rows() != first.rows() || a.cols() != first.cols()) {
                return Err(ConeError::DimensionMismatch("Kraus operators of differing shapes".into()));
            }
        }
        let ranks = operators.iter().map(|a| numerical_rank(a, rank_tol)).collect();
        Ok(KrausDecomposition { operators, ranks })
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// `Σ_i Ad_{A_i}`; `None` for an empty family (dimensions unknown).
    pub fn to_map(&self) -> Option<LinearMap> {
        let first = self.operators.first()?;
        let (m, n) = (first.rows(), first.cols());
        let mut c = ComplexMatrix::zeros(n * m, n * m);
        for a in &self.operators {
            let v = kraus_vector(a);
            c = c + ComplexMatrix::outer(&v, &v);
        }
        Some(LinearMap::from_exact(n, m, c))
    }
}

/// Kraus decomposition of a CP map; errors with `NOT_CP` if the Choi matrix
/// has an eigenvalue below `-tol · max(1, ‖C‖)`.
pub fn kraus_from_choi(map: &LinearMap, tol: f64) -> Result<KrausDecomposition> {
    let eig = eig_hermitian(map.choi().op());
    let scale = eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let min = eig.min_value();
    if min < -tol * scale {
        return Err(ConeError::NotCp { min_eigenvalue: min });
    }
    let top = eig.values.first().copied().unwrap_or(0.0);
    let ops = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &lam)| top > 0.0 && lam > tol * top)
        .map(|(idx, &lam)| {
            let v = eig.vector(idx) * C64::new(lam.sqrt(), 0.0);
            kraus_operator_from_vector(&v, map.dim_in, map.dim_out)
        })
        .collect();
    KrausDecomposition::new(ops)
}
