//! Certificates that a map lies in the cone generated by a seed map.
//!
//! A certificate stores a seed `Ω` and pairs `(A_i, B_i)`; it stands for
//! `Σ_i Ad_{A_i} ∘ Ω ∘ Ad_{B_i}`, whose Choi matrix is
//! `Σ_i (B_iᵗ ⊗ A_i) C_Ω (B_iᵗ ⊗ A_i)*`.

use serde::{Deserialize, Serialize};

use crate::catalog::reduction_map;
use crate::error::{ConeError, Result};
use crate::linops::{
    eig_hermitian_unchecked, ket, kron_vec, numerical_rank, psd_from_eig, schmidt_decompose, svd, tensor,
    BipartiteOperator, CVector, ComplexMatrix, HermitianOperator, Tolerances, C64,
};
use crate::posmaps::{adjoint_map, kraus_vector, KrausDecomposition, LinearMap};

/// Relative agreement required between a certificate and its target.
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Singular values below this fraction of the largest count as exact zeros
/// when reading off the rank of a seed operator.
const SEED_RANK_CUT: f64 = 1e-14;

/// One term `Ad_A ∘ Ω ∘ Ad_B`: `A` acts after the seed, `B` before it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificatePair {
    #[serde(rename = "A")]
    pub a: ComplexMatrix,
    #[serde(rename = "B")]
    pub b: ComplexMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationCertificate {
    #[serde(rename = "seedMap")]
    pub seed_map: LinearMap,
    pub pairs: Vec<CertificatePair>,
}

impl GenerationCertificate {
    /// Checks that the pairs chain through the seed and agree on the outer
    /// dimensions.
    pub fn new(seed_map: LinearMap, pairs: Vec<CertificatePair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(ConeError::InvalidInput("certificate needs at least one pair".into()));
        }
        let (n, m) = (pairs[0].b.cols(), pairs[0].a.rows());
        for (idx, p) in pairs.iter().enumerate() {
            if p.b.rows() != seed_map.dim_in() || p.a.cols() != seed_map.dim_out() {
                return Err(ConeError::DimensionMismatch(format!(
                    "pair {idx}: A is {}x{}, B is {}x{}, seed maps L(H_{}) to L(H_{})",
                    p.a.rows(),
                    p.a.cols(),
                    p.b.rows(),
                    p.b.cols(),
                    seed_map.dim_in(),
                    seed_map.dim_out()
                )));
            }
            if p.b.cols() != n || p.a.rows() != m {
                return Err(ConeError::DimensionMismatch(format!("pair {idx} has different outer dimensions")));
            }
        }
        Ok(GenerationCertificate { seed_map, pairs })
    }

    /// Builds the certificate and checks it against `target`.
    pub fn attach(seed_map: LinearMap, pairs: Vec<CertificatePair>, target: &LinearMap) -> Result<Self> {
        let cert = Self::new(seed_map, pairs)?;
        cert.verify(target)?;
        Ok(cert)
    }

    pub fn dim_in(&self) -> usize {
        self.pairs[0].b.cols()
    }

    pub fn dim_out(&self) -> usize {
        self.pairs[0].a.rows()
    }

    /// Relative Choi distance to `target`; `CERTIFICATE_MISMATCH` above
    /// [`CERTIFICATE_TOL`].
    pub fn verify(&self, target: &LinearMap) -> Result<f64> {
        let got = evaluate_certificate(self)?;
        let err = got.distance(target);
        if err.is_finite() && err <= CERTIFICATE_TOL {
            Ok(err)
        } else {
            Err(ConeError::CertificateMismatch { error: err })
        }
    }
}

/// `Σ_i Ad_{A_i} ∘ Ω ∘ Ad_{B_i}`, summed in pair order.
pub fn evaluate_certificate(cert: &GenerationCertificate) -> Result<LinearMap> {
    let c = cert.seed_map.choi_matrix();
    let (n, m) = (cert.dim_in(), cert.dim_out());
    let mut acc = ComplexMatrix::zeros(n * m, n * m);
    for p in &cert.pairs {
        let k = tensor(&p.b.transpose(), &p.a)?;
        acc = acc + &(&k * c) * &k.adjoint();
    }
    LinearMap::from_choi_matrix(n, m, acc, 1e-8)
}

/// Factors a rank-≤k operator through a rank-k seed: `B · E · C = A`.
///
/// With `A = Σ_j σ_j u_j v_j*` and `E = Σ_j s_j p_j q_j*`, take
/// `B = Σ_j (σ_j / s_j) u_j p_j*` and `C = Σ_j q_j v_j*` over the `rank(A)`
/// leading directions.
pub fn factor_through_rank_k(a: &ComplexMatrix, e: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let se = svd(e);
    let top = se.singular_values.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Err(ConeError::InvalidInput("seed operator is zero".into()));
    }
    let k = se.singular_values.iter().filter(|&&s| s > SEED_RANK_CUT * top).count();
    let ratio = se.singular_values[k - 1] / top;
    if ratio < 1e-12 {
        return Err(ConeError::IllConditioned { ratio });
    }
    let r = numerical_rank(a, Tolerances::default().rank);
    if r > k {
        return Err(ConeError::RankTooHigh { rank: r, k });
    }
    let sa = svd(a);
    let mut b = ComplexMatrix::zeros(a.rows(), e.rows());
    let mut c = ComplexMatrix::zeros(e.cols(), a.cols());
    for j in 0..r {
        let ua = sa.u.inner().column(j).into_owned();
        let va = sa.v.inner().column(j).into_owned();
        let ue = se.u.inner().column(j).into_owned();
        let ve = se.v.inner().column(j).into_owned();
        b = b + ComplexMatrix::outer(&ua, &ue).scale(sa.singular_values[j] / se.singular_values[j]);
        c = c + ComplexMatrix::outer(&ve, &va);
    }
    Ok((b, c))
}

/// `diag(1, …, 1, 0, …, 0)` with `k` ones.
pub fn default_seed(n: usize, k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| if i == j && i < k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

/// Certificate that `Σ_i Ad_{K_i}` lies in the cone generated by `Ad_E`.
pub fn spk_generation_certificate(kraus: &KrausDecomposition, e: &ComplexMatrix) -> Result<GenerationCertificate> {
    let target = kraus
        .to_map()
        .ok_or_else(|| ConeError::InvalidInput("empty Kraus family".into()))?;
    let mut pairs = Vec::with_capacity(kraus.len());
    for op in &kraus.operators {
        let (b, c) = factor_through_rank_k(op, e)?;
        pairs.push(CertificatePair { a: b, b: c });
    }
    GenerationCertificate::attach(adjoint_map(e), pairs, &target)
}

/// `a ⊗ b + c ⊗ d`, one Schmidt-rank-≤2 Gram vector of a Choi matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtPair {
    pub a: CVector,
    pub b: CVector,
    pub c: CVector,
    pub d: CVector,
}

impl SchmidtPair {
    pub fn vector(&self) -> CVector {
        kron_vec(&self.a, &self.b) + kron_vec(&self.c, &self.d)
    }
}

/// Splits a Schmidt-rank-≤2 vector on `C^n ⊗ C^m` into a quadruple.
pub fn schmidt_pair_from_vector(v: &CVector, n: usize, m: usize) -> Result<SchmidtPair> {
    let sd = schmidt_decompose(v, n, m)?;
    let rank = sd.rank(Tolerances::default().rank);
    if rank > 2 {
        return Err(ConeError::RankTooHigh { rank, k: 2 });
    }
    let term = |t: usize| -> (CVector, CVector) {
        if t < rank {
            (&sd.left[t] * C64::new(sd.coefficients[t], 0.0), sd.right[t].clone())
        } else {
            (CVector::zeros(n), CVector::zeros(m))
        }
    };
    let (a, b) = term(0);
    let (c, d) = term(1);
    Ok(SchmidtPair { a, b, c, d })
}

/// Quadruples from the Kraus operators of a 2-superpositive map.
pub fn schmidt_pairs_from_kraus(kraus: &KrausDecomposition) -> Result<Vec<SchmidtPair>> {
    kraus
        .operators
        .iter()
        .map(|op| schmidt_pair_from_vector(&kraus_vector(op), op.cols(), op.rows()))
        .collect()
}

/// Certificate that `Σ_k v_k v_k*`, `v_k = a_k ⊗ b_k + c_k ⊗ d_k`, is the
/// Choi matrix of a map in the cone generated by `R∘t`.
///
/// Since `C_{R∘t} = Σ_{i<j} w_ij w_ij*` with `w_ij = e_i⊗e_j − e_j⊗e_i`, an
/// inner operator `B` with `Bᵗe₁ = a`, `Bᵗe₂ = c` and an outer `A` with
/// `Ae₁ = d`, `Ae₂ = −b` (both vanishing on the other basis vectors) send
/// `w_12` to `−v` and every other `w_ij` to zero.
pub fn sp2_via_reduction(pairs: &[SchmidtPair]) -> Result<GenerationCertificate> {
    let first = pairs
        .first()
        .ok_or_else(|| ConeError::InvalidInput("need at least one quadruple".into()))?;
    let (n, m) = (first.a.len(), first.b.len());
    let q = n.max(2);
    let mut out = Vec::with_capacity(pairs.len());
    for (idx, p) in pairs.iter().enumerate() {
        if p.a.len() != n || p.c.len() != n || p.b.len() != m || p.d.len() != m {
            return Err(ConeError::DimensionMismatch(format!("quadruple {idx} has inconsistent lengths")));
        }
        let inner = ComplexMatrix::from_fn(q, n, |r, s| match r {
            0 => p.a[s],
            1 => p.c[s],
            _ => C64::new(0.0, 0.0),
        });
        let outer = ComplexMatrix::from_fn(m, q, |r, s| match s {
            0 => p.d[r],
            1 => -p.b[r],
            _ => C64::new(0.0, 0.0),
        });
        out.push(CertificatePair { a: outer, b: inner });
    }
    GenerationCertificate::new(reduction_map(q).pre_transpose(), out)
}

/// The map whose Choi matrix is `Σ_k v_k v_k*` for the given quadruples.
pub fn map_from_schmidt_pairs(pairs: &[SchmidtPair]) -> Result<LinearMap> {
    let first = pairs
        .first()
        .ok_or_else(|| ConeError::InvalidInput("need at least one quadruple".into()))?;
    let (n, m) = (first.a.len(), first.b.len());
    let c = pairs.iter().fold(ComplexMatrix::zeros(n * m, n * m), |acc, p| {
        let v = p.vector();
        acc + ComplexMatrix::outer(&v, &v)
    });
    LinearMap::from_choi_matrix(n, m, c, 1e-8)
}

/// `C_{R∘t} = I − Σ_{i,j} e_i e_j* ⊗ e_j e_i*`, built entry by entry.
pub fn choi_of_reduction_transpose(n: usize) -> Result<BipartiteOperator> {
    if n < 2 {
        return Err(ConeError::InvalidInput("need n >= 2".into()));
    }
    let c = ComplexMatrix::from_fn(n * n, n * n, |r, s| {
        let (i, k) = (r / n, r % n);
        let (j, l) = (s / n, s % n);
        let id = if r == s { 1.0 } else { 0.0 };
        let swap = if i == l && k == j { 1.0 } else { 0.0 };
        C64::new(id - swap, 0.0)
    });
    BipartiteOperator::from_matrix(n, n, c, 0.0)
}

/// `Σ_{i<j} (e_i⊗e_j − e_j⊗e_i)(e_i⊗e_j − e_j⊗e_i)*`.
pub fn antisymmetric_expansion(n: usize) -> BipartiteOperator {
    let mut c = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in i + 1..n {
            let w = kron_vec(&ket(n, i), &ket(n, j)) - kron_vec(&ket(n, j), &ket(n, i));
            c = c + ComplexMatrix::outer(&w, &w);
        }
    }
    BipartiteOperator::from_matrix(n, n, c, 0.0).expect("sum of projectors")
}

/// The antisymmetric Gram vectors of `C_{R∘t}` as quadruples
/// `a = e_i, b = e_j, c = e_j, d = −e_i`.
pub fn reduction_transpose_pairs(n: usize) -> Vec<SchmidtPair> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(SchmidtPair {
                a: ket(n, i),
                b: ket(n, j),
                c: ket(n, j),
                d: -ket(n, i),
            });
        }
    }
    out
}

/// Smallest eigenvalue of `(id ⊗ Φ)(X)` and whether it certifies
/// detection, i.e. lies below `-tol · max(1, ‖·‖)`.
pub fn detection(phi: &LinearMap, x: &BipartiteOperator, tol: f64) -> Result<(bool, f64)> {
    let y = phi.apply_on_second_factor(x)?;
    let y = HermitianOperator::new(y, 1e-8)?;
    let check = psd_from_eig(&eig_hermitian_unchecked(y.matrix()), tol);
    Ok((!check.psd, check.min_eigenvalue))
}

/// Checks on `X` that detection by the certified map implies detection by
/// the seed. Returns `true` when the implication holds (vacuously when the
/// certified map does not detect `X`).
///
/// The implication is guaranteed when every inner operator `B_i` is a
/// multiple of the identity. With general `B_i` the seed is evaluated on the
/// filtered states `(I ⊗ B_i) X (I ⊗ B_i)*`, not on `X`, so a `false` here is
/// a genuine counterexample rather than a bug.
pub fn certificate_implies_detection(cert: &GenerationCertificate, x: &BipartiteOperator) -> Result<bool> {
    let psi = evaluate_certificate(cert)?;
    let tol = Tolerances::default().psd;
    let (psi_detects, _) = detection(&psi, x, tol)?;
    if !psi_detects {
        return Ok(true);
    }
    let (phi_detects, _) = detection(&cert.seed_map, x, tol)?;
    Ok(phi_detects)
}
