//! Named maps, operators and states, plus seeded random generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{ConeError, Result};
use crate::linops::{
    ket, kron_vec, BipartiteOperator, CVector, ComplexMatrix, HermitianOperator, C64, ZERO,
};
use crate::posmaps::{adjoint_map, map_from_choi, KrausDecomposition, LinearMap};

/// Name of the pseudo-random generator behind every seeded routine. Reports
/// carry it so recorded seeds stay meaningful.
pub const PRNG_ALGORITHM: &str = "chacha8/rand_chacha-0.9";

/// Largest spin system `spin_system` will build by default.
pub const SPIN_CAP: usize = 4;

/// Deterministic generator for `(seed, stream)`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Normalized complex Gaussian vector (Haar-distributed direction).
pub fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> CVector {
    let v = CVector::from_fn(dim, |_, _| gaussian_complex(rng));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

pub fn identity_map(n: usize) -> LinearMap {
    LinearMap::from_action(n, n, |x| x.clone()).expect("identity is Hermiticity-preserving")
}

pub fn transpose_map(n: usize) -> LinearMap {
    LinearMap::from_action(n, n, |x| x.transpose()).expect("transpose is Hermiticity-preserving")
}

/// `R(X) = Tr(X) I - X`.
pub fn reduction_map(n: usize) -> LinearMap {
    LinearMap::from_action(n, n, |x| ComplexMatrix::identity(n).scale_complex(x.trace()) - x)
        .expect("reduction map is Hermiticity-preserving")
}

/// `X ↦ Tr(X) I`; its Choi matrix is the identity.
pub fn trace_map(n: usize) -> LinearMap {
    LinearMap::from_action(n, n, |x| ComplexMatrix::identity(n).scale_complex(x.trace()))
        .expect("trace map is Hermiticity-preserving")
}

/// `X ↦ Tr(X) I - X / k`, which is k-positive but not (k+1)-positive.
pub fn generalized_reduction_map(n: usize, k: usize) -> LinearMap {
    let inv = 1.0 / k as f64;
    LinearMap::from_action(n, n, |x| ComplexMatrix::identity(n).scale_complex(x.trace()) - x.scale(inv))
        .expect("Hermiticity-preserving")
}

/// Choi's positive, non-decomposable map on `L(H_3)`.
pub fn choi_map() -> LinearMap {
    LinearMap::from_action(3, 3, |x| {
        let mut y = -x;
        y[(0, 0)] = x[(0, 0)] + x[(2, 2)];
        y[(1, 1)] = x[(0, 0)] + x[(1, 1)];
        y[(2, 2)] = x[(1, 1)] + x[(2, 2)];
        y
    })
    .expect("Choi map is Hermiticity-preserving")
}

/// The rank-two pair `U, V` and `Φ = Ad_U + Ad_V` on `L(H_3)`.
#[derive(Clone, Debug)]
pub struct UvExample {
    pub map: LinearMap,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

pub fn uv_operators() -> (ComplexMatrix, ComplexMatrix) {
    let u = ComplexMatrix::from_real(3, 3, &[1., 0., 0., 0., 1., 0., 0., 0., 0.]);
    let v = ComplexMatrix::from_real(3, 3, &[0., 1., 0., 0., 0., 0., 1., 0., 0.]);
    (u, v)
}

pub fn uv_example_map() -> UvExample {
    let (u, v) = uv_operators();
    let map = adjoint_map(&u).add(&adjoint_map(&v)).expect("same shape");
    UvExample { map, u, v }
}

/// `w = e_1 ⊗ f_1 + e_2 ⊗ f_2` in `C^2 ⊗ C^n`.
pub fn compressed_entangled_vector(n: usize) -> CVector {
    kron_vec(&ket(2, 0), &ket(n, 0)) + kron_vec(&ket(2, 1), &ket(n, 1))
}

/// The rank-one `2 ⊗ 3` input `w w*` used to show the UV map is not in `P₂∘t`.
pub fn uv_witness_input() -> BipartiteOperator {
    BipartiteOperator::new(2, 3, HermitianOperator::projector(&compressed_entangled_vector(3))).expect("6 = 2·3")
}

/// `Σ_i e_i ⊗ e_i` (unnormalized).
pub fn maximally_entangled_vector(n: usize) -> CVector {
    (0..n).fold(CVector::zeros(n * n), |acc, i| acc + kron_vec(&ket(n, i), &ket(n, i)))
}

/// Normalized maximally entangled projector on `H_n ⊗ H_n`, trace one.
pub fn maximally_entangled_state(n: usize) -> BipartiteOperator {
    let v = maximally_entangled_vector(n) / C64::new((n as f64).sqrt(), 0.0);
    BipartiteOperator::new(n, n, HermitianOperator::projector(&v)).expect("square")
}

/// Pauli matrices in the labelling used for the spin-factor construction:
/// `σ₁ = diag(1, -1)`, `σ₂ = [[0,1],[1,0]]`, `σ₃ = [[0,-i],[i,0]]`.
pub fn pauli(index: usize) -> ComplexMatrix {
    match index {
        1 => ComplexMatrix::diag_real(&[1.0, -1.0]),
        2 => ComplexMatrix::from_real(2, 2, &[0., 1., 1., 0.]),
        3 => ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, -1.0),
            (1, 0) => C64::new(0.0, 1.0),
            _ => ZERO,
        }),
        _ => ComplexMatrix::identity(2),
    }
}

/// Anticommuting Hermitian unitaries `s_1 … s_{2n}` on `(C²)^{⊗n}`.
#[derive(Clone, Debug, Serialize)]
pub struct SpinSystem {
    pub n: usize,
    #[serde(rename = "sOperators")]
    pub s_operators: Vec<ComplexMatrix>,
}

fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| crate::linops::tensor(&acc, f).expect("within spin cap"))
}

impl SpinSystem {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_cap(n, SPIN_CAP)
    }

    pub fn with_cap(n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(ConeError::InvalidInput("spin system needs n >= 1".into()));
        }
        if n > cap {
            return Err(ConeError::DimensionCap { requested: n, cap });
        }
        let mut s_operators = Vec::with_capacity(2 * n);
        for j in 0..n {
            for which in [1, 2] {
                let mut factors: Vec<ComplexMatrix> = (0..j).map(|_| pauli(3)).collect();
                factors.push(pauli(which));
                factors.extend((j + 1..n).map(|_| ComplexMatrix::identity(2)));
                s_operators.push(kron_all(&factors));
            }
        }
        Ok(SpinSystem { n, s_operators })
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// `s_i` with `s_0 = I`.
    pub fn s(&self, i: usize) -> ComplexMatrix {
        if i == 0 {
            ComplexMatrix::identity(self.dim())
        } else {
            self.s_operators[i - 1].clone()
        }
    }

    /// Normalized trace, `τ(I) = 1`.
    pub fn tau(&self, x: &ComplexMatrix) -> C64 {
        tau(x)
    }
}

/// Normalized trace `Tr(X) / dim`.
pub fn tau(x: &ComplexMatrix) -> C64 {
    x.trace() / C64::new(x.rows() as f64, 0.0)
}

/// `E_k(X) = Σ_{i=0}^{k} τ(s_i X) s_i`, the projection onto the spin factor
/// spanned by `I, s_1, …, s_k`.
pub fn spin_projection_e(sys: &SpinSystem, k: usize) -> Result<LinearMap> {
    if k > 2 * sys.n {
        return Err(ConeError::InvalidInput(format!("k = {k} exceeds 2n = {}", 2 * sys.n)));
    }
    let basis: Vec<ComplexMatrix> = (0..=k).map(|i| sys.s(i)).collect();
    LinearMap::from_action(sys.dim(), sys.dim(), |x| {
        basis
            .iter()
            .fold(ComplexMatrix::zeros(sys.dim(), sys.dim()), |acc, s| acc + s.scale_complex(tau(&(s * x))))
    })
}

/// `τ′(X) = τ(X) I_m` on `L(H_m)`.
pub fn tau_prime(m: usize) -> LinearMap {
    LinearMap::from_action(m, m, |x| ComplexMatrix::identity(m).scale_complex(tau(x))).expect("Hermiticity-preserving")
}

/// `F_k = E_k ⊗ τ′`, the projection onto `V_k ⊗ I_m`.
pub fn spin_projection_f(sys: &SpinSystem, k: usize, m: usize) -> Result<LinearMap> {
    if m == 0 {
        return Err(ConeError::InvalidInput("m must be at least 1".into()));
    }
    spin_projection_e(sys, k)?.tensor(&tau_prime(m))
}

/// Functional `Y ↦ Tr(σ Y)` as a map with one-dimensional output. Its Choi
/// matrix is `σᵗ`.
pub fn state_functional(sigma: &HermitianOperator) -> LinearMap {
    let d = sigma.dim();
    map_from_choi(BipartiteOperator::new(d, 1, HermitianOperator::new(sigma.matrix().transpose(), 0.0).expect("transpose of Hermitian")).expect("d·1"))
}

/// Mutually orthogonal normalized product vectors `u_i ⊗ v_i`.
#[derive(Clone, Debug, Serialize)]
pub struct UpbFamily {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    #[serde(skip)]
    pub vectors: Vec<(CVector, CVector)>,
}

impl UpbFamily {
    /// Validates normalization and pairwise orthogonality within `1e-12`.
    /// Unextendibility is not checked here; see
    /// [`crate::cones::product_vector_in_subspace`].
    pub fn new(dim_a: usize, dim_b: usize, vectors: Vec<(CVector, CVector)>) -> Result<Self> {
        for (u, v) in &vectors {
            if u.len() != dim_a || v.len() != dim_b {
                return Err(ConeError::DimensionMismatch("UPB factor of wrong length".into()));
            }
        }
        let family = UpbFamily { dim_a, dim_b, vectors };
        let gram = family.gram();
        let dev = gram.rel_distance(&ComplexMatrix::identity(family.len()));
        if dev > 1e-12 {
            return Err(ConeError::InvalidInput(format!(
                "product vectors are not orthonormal (Gram deviation {dev:.3e})"
            )));
        }
        Ok(family)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn product_vectors(&self) -> Vec<CVector> {
        self.vectors.iter().map(|(u, v)| kron_vec(u, v)).collect()
    }

    pub fn gram(&self) -> ComplexMatrix {
        let p = self.product_vectors();
        ComplexMatrix::from_fn(p.len(), p.len(), |i, j| p[i].dotc(&p[j]))
    }
}

/// The five-vector Tiles family in `C³ ⊗ C³`.
pub fn tiles_upb() -> UpbFamily {
    let e = |i| ket(3, i);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| C64::new(x, 0.0);
    let minus = |i, j| (e(i) - e(j)) * c(h);
    let uniform = (e(0) + e(1) + e(2)) * c(1.0 / 3f64.sqrt());
    let vectors = vec![
        (e(0), minus(0, 1)),
        (minus(0, 1), e(2)),
        (e(2), minus(1, 2)),
        (minus(1, 2), e(0)),
        (uniform.clone(), uniform),
    ];
    UpbFamily::new(3, 3, vectors).expect("Tiles is orthonormal")
}

/// `ρ = I - Σ_i |u_i ⊗ v_i⟩⟨u_i ⊗ v_i|`.
pub fn upb_complement_state(upb: &UpbFamily) -> BipartiteOperator {
    let d = upb.dim_a * upb.dim_b;
    let rho = upb
        .product_vectors()
        .iter()
        .fold(ComplexMatrix::identity(d), |acc, p| acc - ComplexMatrix::outer(p, p));
    BipartiteOperator::from_matrix(upb.dim_a, upb.dim_b, rho, 1e-10).expect("Hermitian by construction")
}

/// Wishart matrix `G G*` with a `dim x dim` complex Gaussian `G`.
pub fn random_psd(dim: usize, seed: u64) -> HermitianOperator {
    let mut rng = seeded_rng(seed, 0);
    random_psd_with(dim, dim, &mut rng)
}

pub(crate) fn random_psd_with(dim: usize, rank: usize, rng: &mut impl Rng) -> HermitianOperator {
    let g = gaussian_matrix(dim, rank, rng);
    HermitianOperator::new(&g * &g.adjoint(), 1e-8).expect("Gram matrix is Hermitian")
}

/// Random full-rank bipartite density matrix (trace one).
pub fn random_state(dim_a: usize, dim_b: usize, seed: u64) -> BipartiteOperator {
    let p = random_psd(dim_a * dim_b, seed);
    let tr = p.trace();
    BipartiteOperator::from_matrix(dim_a, dim_b, p.matrix().scale(1.0 / tr), 1e-8).expect("square")
}

/// Random k-superpositive map `Σ_i Ad_{A_i}` with `A_i = G_i H_i`, `G_i` of
/// shape `n x k` and `H_i` of shape `k x n`, together with that Kraus family.
pub fn random_spk_map(n: usize, k: usize, terms: usize, seed: u64) -> Result<(LinearMap, KrausDecomposition)> {
    if k == 0 || k > n {
        return Err(ConeError::InvalidInput(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if terms == 0 {
        return Err(ConeError::InvalidInput("need at least one Kraus term".into()));
    }
    let mut rng = seeded_rng(seed, 0);
    let ops = (0..terms)
        .map(|_| {
            let g = gaussian_matrix(n, k, &mut rng);
            let h = gaussian_matrix(k, n, &mut rng);
            &g * &h
        })
        .collect();
    let kraus = KrausDecomposition::new(ops)?;
    let map = kraus.to_map().expect("non-empty family");
    Ok((map, kraus))
}

/// Resolves a catalog name to a map. Names: `id`, `transpose`, `reduction`,
/// `trace`, `choi3`, `uv`, `spinE:<n>:<k>`, `spinF:<n>:<k>:<m>`,
/// `tiles-state`, `spk:<n>:<k>:<terms>:<seed>`. `n` sizes the dimension-free
/// names.
pub fn by_name(name: &str, n: usize) -> Result<LinearMap> {
    let parts: Vec<&str> = name.split(':').collect();
    let num = |idx: usize| -> Result<usize> {
        parts
            .get(idx)
            .ok_or_else(|| ConeError::InvalidInput(format!("`{name}` is missing parameter {idx}")))?
            .parse::<usize>()
            .map_err(|_| ConeError::InvalidInput(format!("`{name}`: parameter {idx} is not a count")))
    };
    match parts[0] {
        "id" => Ok(identity_map(n)),
        "transpose" => Ok(transpose_map(n)),
        "reduction" => {
            if n < 2 {
                return Err(ConeError::InvalidInput("reduction map needs n >= 2".into()));
            }
            Ok(reduction_map(n))
        }
        "trace" => Ok(trace_map(n)),
        "choi3" => Ok(choi_map()),
        "uv" => Ok(uv_example_map().map),
        "tiles-state" => Ok(map_from_choi(upb_complement_state(&tiles_upb()))),
        "spinE" => spin_projection_e(&SpinSystem::new(num(1)?)?, num(2)?),
        "spinF" => spin_projection_f(&SpinSystem::new(num(1)?)?, num(2)?, num(3)?),
        "spk" => Ok(random_spk_map(num(1)?, num(2)?, num(3)?, num(4)? as u64)?.0),
        _ => Err(ConeError::InvalidInput(format!("unknown catalog name `{name}`"))),
    }
}

/// Unit matrix helper for doc examples and tests.
pub fn e(n: usize, i: usize, j: usize) -> ComplexMatrix {
    ComplexMatrix::unit(n, n, i, j)
}
