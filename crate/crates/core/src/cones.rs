//! Cone-membership predicates with witnesses.
//!
//! Exact tests (eigenvalue based) answer `HOLDS` or `FAILS`. Searches over
//! product or low Schmidt-rank vectors can only ever certify a violation, so
//! they answer `FAILS` with a re-checkable witness or `LIKELY_HOLDS`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::catalog::{
    identity_map, uv_witness_input, random_unit_vector,
    seeded_rng, uv_example_map, PRNG_ALGORITHM,
};
use crate::error::{ConeError, Result};
use crate::linops::{
    eig_hermitian, eig_hermitian_unchecked, is_psd, partial_trace_matrix, partial_transpose, range_projection,
    schmidt_decompose, svd, tensor, BipartiteOperator, CVector, ComplexMatrix, HermitianOperator, Subsystem,
    Tolerances, C64, ZERO,
};
use crate::posmaps::LinearMap;

/// Largest per-side dimension accepted by tensor-product predicates.
pub const TENSOR_SIDE_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictStatus {
    Holds,
    Fails,
    LikelyHolds,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::Holds => "HOLDS",
            VerdictStatus::Fails => "FAILS",
            VerdictStatus::LikelyHolds => "LIKELY_HOLDS",
        }
    }

    /// `HOLDS` or `LIKELY_HOLDS`.
    pub fn holds(&self) -> bool {
        !matches!(self, VerdictStatus::Fails)
    }
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Vector(CVector),
    Operator(ComplexMatrix),
}

impl Witness {
    pub fn as_vector(&self) -> Option<&CVector> {
        match self {
            Witness::Vector(v) => Some(v),
            Witness::Operator(_) => None,
        }
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Witness::Vector(v) => {
                let mut st = s.serialize_struct("Witness", 3)?;
                st.serialize_field("kind", "vector")?;
                st.serialize_field("re", &v.iter().map(|z| z.re).collect::<Vec<_>>())?;
                st.serialize_field("im", &v.iter().map(|z| z.im).collect::<Vec<_>>())?;
                st.end()
            }
            Witness::Operator(m) => {
                let mut st = s.serialize_struct("Witness", 2)?;
                st.serialize_field("kind", "operator")?;
                st.serialize_field("matrix", m)?;
                st.end()
            }
        }
    }
}

/// How a verdict was reached.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostics {
    pub method: String,
    pub exact: bool,
    pub restarts: usize,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prng: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_restart: Option<usize>,
}

impl Diagnostics {
    fn exact(method: &str) -> Self {
        Diagnostics {
            method: method.to_string(),
            exact: true,
            restarts: 0,
            iterations: 0,
            seed: None,
            prng: None,
            best_restart: None,
        }
    }

    fn search(method: &str, cfg: &SeeSawConfig, outcome: &SearchOutcome) -> Self {
        Diagnostics {
            method: method.to_string(),
            exact: false,
            restarts: outcome.restarts,
            iterations: outcome.iterations,
            seed: Some(cfg.seed),
            prng: Some(PRNG_ALGORITHM),
            best_restart: Some(outcome.best_restart),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub status: VerdictStatus,
    pub margin: f64,
    pub witness: Option<Witness>,
    pub diagnostics: Diagnostics,
}

impl MembershipVerdict {
    pub fn holds(&self) -> bool {
        self.status.holds()
    }

    pub fn fails(&self) -> bool {
        self.status == VerdictStatus::Fails
    }

    /// Re-evaluates a vector witness on `c`: `⟨v|C|v⟩ / ⟨v|v⟩`.
    pub fn recheck(&self, c: &ComplexMatrix) -> Option<f64> {
        let v = self.witness.as_ref()?.as_vector()?;
        (v.len() == c.rows()).then(|| rayleigh(c, v))
    }
}

/// Configuration of the alternating (see-saw) searches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeeSawConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub convergence_tol: f64,
    pub negativity_threshold: f64,
    pub seed: u64,
    /// Relative tolerance of the exact eigenvalue tests a search may fall
    /// back to.
    #[serde(default = "default_exact_tol")]
    pub exact_tol: f64,
}

fn default_exact_tol() -> f64 {
    Tolerances::default().psd
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        SeeSawConfig {
            restarts: 50,
            max_iters: 200,
            convergence_tol: 1e-10,
            negativity_threshold: -1e-7,
            seed: 0,
            exact_tol: default_exact_tol(),
        }
    }
}

impl SeeSawConfig {
    pub fn with_seed(seed: u64) -> Self {
        SeeSawConfig { seed, ..Self::default() }
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(ConeError::InvalidInput("restarts and maxIters must be at least 1".into()));
        }
        if !(self.convergence_tol.is_finite() && self.negativity_threshold.is_finite() && self.exact_tol.is_finite()) {
            return Err(ConeError::InvalidInput("see-saw thresholds must be finite".into()));
        }
        Ok(())
    }
}

fn rayleigh(c: &ComplexMatrix, v: &CVector) -> f64 {
    c.quadratic_form(v).re / v.norm_squared()
}

// ---------------------------------------------------------------------------
// search engine

/// Best vector found by [`min_schmidt_rank_quadratic`].
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// `⟨v|C|v⟩` for the unit vector `v`, recomputed from scratch.
    pub value: f64,
    pub vector: CVector,
    pub restarts: usize,
    pub iterations: usize,
    pub best_restart: usize,
}

struct RestartOutcome {
    value: f64,
    vector: DVector<C64>,
    iterations: usize,
}

/// Swaps the tensor factors of a vector on `C^{d1} ⊗ C^{d2}`.
fn swap_vector(v: &DVector<C64>, d1: usize, d2: usize) -> DVector<C64> {
    DVector::from_fn(d1 * d2, |idx, _| {
        let (j, i) = (idx / d1, idx % d1);
        v[i * d2 + j]
    })
}

fn swap_operator(c: &DMatrix<C64>, d1: usize, d2: usize) -> DMatrix<C64> {
    DMatrix::from_fn(d1 * d2, d1 * d2, |r, s| {
        let (j, i) = (r / d1, r % d1);
        let (l, ip) = (s / d1, s % d1);
        c[(i * d2 + j, ip * d2 + l)]
    })
}

/// Orthonormal `d2 x k` frame whose span contains the right Schmidt factors
/// of `v` with the `k` largest coefficients.
fn right_frame(v: &DVector<C64>, d1: usize, d2: usize, k: usize) -> DMatrix<C64> {
    let m = DMatrix::from_fn(d1, d2, |i, j| v[i * d2 + j]);
    let s = svd(&ComplexMatrix::from(m));
    // v = Σ s_t u_t ⊗ conj(v_t)
    DMatrix::from_fn(d2, k, |l, t| s.v[(l, t)].conj())
}

/// Compression of `c` to `C^{d1} ⊗ span(F)` in the basis `e_i ⊗ f_t`.
fn compress_right(c: &DMatrix<C64>, d1: usize, d2: usize, f: &DMatrix<C64>) -> DMatrix<C64> {
    let k = f.ncols();
    let fa = f.adjoint();
    let mut out = DMatrix::zeros(d1 * k, d1 * k);
    for i in 0..d1 {
        for j in 0..d1 {
            let blk = c.view((i * d2, j * d2), (d2, d2));
            let r = &fa * blk * f;
            out.view_mut((i * k, j * k), (k, k)).copy_from(&r);
        }
    }
    out
}

fn expand_right(a: &CVector, d1: usize, d2: usize, f: &DMatrix<C64>) -> DVector<C64> {
    let k = f.ncols();
    DVector::from_fn(d1 * d2, |idx, _| {
        let (i, l) = (idx / d2, idx % d2);
        (0..k).fold(ZERO, |acc, t| acc + a[i * k + t] * f[(l, t)])
    })
}

fn min_eigenpair(m: DMatrix<C64>) -> (f64, CVector) {
    let eig = eig_hermitian_unchecked(&ComplexMatrix::from(m));
    (eig.min_value(), eig.min_vector())
}

fn see_saw_restart(
    c: &DMatrix<C64>,
    cs: &DMatrix<C64>,
    d1: usize,
    d2: usize,
    k: usize,
    start: DVector<C64>,
    cfg: &SeeSawConfig,
) -> RestartOutcome {
    let mut v = start;
    let mut prev = f64::INFINITY;
    let mut iterations = 0;
    for _ in 0..cfg.max_iters {
        iterations += 1;
        let f = right_frame(&v, d1, d2, k);
        let (_, a) = min_eigenpair(compress_right(c, d1, d2, &f));
        v = expand_right(&a, d1, d2, &f);

        let vs = swap_vector(&v, d1, d2);
        let g = right_frame(&vs, d2, d1, k);
        let (val, b) = min_eigenpair(compress_right(cs, d2, d1, &g));
        v = swap_vector(&expand_right(&b, d2, d1, &g), d2, d1);

        if prev - val <= cfg.convergence_tol * val.abs().max(1.0) {
            break;
        }
        prev = val;
    }
    let norm = v.norm();
    v /= C64::new(norm, 0.0);
    let value = (v.adjoint() * c * &v)[(0, 0)].re;
    RestartOutcome { value, vector: v, iterations }
}

/// Minimizes `⟨v|C|v⟩` over unit vectors `v ∈ C^{d1} ⊗ C^{d2}` of Schmidt rank
/// at most `k`.
///
/// Each restart alternates between the two factors: with the right frame
/// fixed the problem is an ordinary minimum-eigenvector problem, and the same
/// holds for the left frame. The objective never increases. `warm` vectors
/// replace the random starts of the first restarts. Restarts run in parallel
/// but are reduced by index, so the result only depends on `cfg`.
pub fn min_schmidt_rank_quadratic(
    c: &BipartiteOperator,
    k: usize,
    cfg: &SeeSawConfig,
    warm: &[CVector],
) -> Result<SearchOutcome> {
    cfg.validate()?;
    let (d1, d2) = (c.dim_a(), c.dim_b());
    let n = d1 * d2;
    if k == 0 {
        return Err(ConeError::InvalidInput("Schmidt rank bound must be at least 1".into()));
    }
    if warm.iter().any(|w| w.len() != n) {
        return Err(ConeError::DimensionMismatch("warm start of wrong length".into()));
    }
    if k >= d1.min(d2) {
        let eig = eig_hermitian(c.op());
        return Ok(SearchOutcome {
            value: eig.min_value(),
            vector: eig.min_vector(),
            restarts: 0,
            iterations: 0,
            best_restart: 0,
        });
    }
    let cm = c.matrix().inner().clone();
    let cs = swap_operator(&cm, d1, d2);
    let restarts = cfg.restarts.max(warm.len());
    let outcomes: Vec<RestartOutcome> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let start = match warm.get(r) {
                Some(w) if w.norm() > 0.0 => w.clone(),
                _ => random_unit_vector(n, &mut seeded_rng(cfg.seed, r as u64)),
            };
            see_saw_restart(&cm, &cs, d1, d2, k, start, cfg)
        })
        .collect();
    let mut best = 0;
    for (idx, o) in outcomes.iter().enumerate() {
        if o.value < outcomes[best].value {
            best = idx;
        }
    }
    let iterations = outcomes.iter().map(|o| o.iterations).sum();
    let o = &outcomes[best];
    Ok(SearchOutcome {
        value: o.value,
        vector: o.vector.clone(),
        restarts,
        iterations,
        best_restart: best,
    })
}

/// Smallest Schmidt rank of `v` above a relative cut of `1e-9`.
pub fn schmidt_rank(v: &CVector, d1: usize, d2: usize) -> usize {
    schmidt_decompose(v, d1, d2).map(|s| s.rank(1e-9)).unwrap_or(0)
}

// ---------------------------------------------------------------------------
// exact predicates

fn verdict_from_eig(h: &HermitianOperator, tol: f64, method: &str) -> MembershipVerdict {
    let eig = eig_hermitian(h);
    let check = crate::linops::psd_from_eig(&eig, tol);
    let (status, witness) = if check.psd {
        (VerdictStatus::Holds, None)
    } else {
        (VerdictStatus::Fails, Some(Witness::Vector(eig.min_vector())))
    };
    MembershipVerdict {
        status,
        margin: check.min_eigenvalue,
        witness,
        diagnostics: Diagnostics::exact(method),
    }
}

/// Complete positivity: `C_Φ ⪰ 0`.
pub fn is_completely_positive(phi: &LinearMap, tol: f64) -> MembershipVerdict {
    verdict_from_eig(phi.choi().op(), tol, "choi-spectrum")
}

/// Membership in `CP∘t`: `Φ∘t` is completely positive.
pub fn is_completely_copositive(phi: &LinearMap, tol: f64) -> MembershipVerdict {
    let mut v = is_completely_positive(&phi.pre_transpose(), tol);
    v.diagnostics.method = "choi-spectrum of phi∘t".into();
    v
}

fn require_psd(x: &BipartiteOperator, tol: f64) -> Result<()> {
    let check = is_psd(x.op(), tol);
    if check.psd {
        Ok(())
    } else {
        Err(ConeError::NotPsdInput {
            min_eigenvalue: check.min_eigenvalue,
        })
    }
}

/// Positive partial transpose. The witness `v` satisfies
/// `⟨v|X^{T_B}|v⟩ = margin < 0`.
pub fn is_ppt(x: &BipartiteOperator, tol: f64) -> Result<MembershipVerdict> {
    require_psd(x, tol)?;
    Ok(verdict_from_eig(partial_transpose(x, Subsystem::B).op(), tol, "partial-transpose-spectrum"))
}

/// Separability on `C² ⊗ C²`, where PPT is exact.
pub fn is_separable_2x2(x: &BipartiteOperator, tol: f64) -> Result<MembershipVerdict> {
    if x.dim_a() != 2 || x.dim_b() != 2 {
        return Err(ConeError::WrongDimension(format!(
            "separability test is exact only on 2⊗2, got {}⊗{}",
            x.dim_a(),
            x.dim_b()
        )));
    }
    let mut v = is_ppt(x, tol)?;
    v.diagnostics.method = "ppt (exact on 2⊗2)".into();
    Ok(v)
}

// ---------------------------------------------------------------------------
// searches

/// Minimum of `⟨x⊗y|C|x⊗y⟩` found by the see-saw search over unit product
/// vectors.
#[derive(Clone, Debug)]
pub struct BlockMinimum {
    pub value: f64,
    pub x: CVector,
    pub y: CVector,
    pub restarts: usize,
    pub iterations: usize,
}

pub fn block_positivity_min(c: &BipartiteOperator, cfg: &SeeSawConfig) -> Result<BlockMinimum> {
    let (d1, d2) = (c.dim_a(), c.dim_b());
    // when one factor is trivial every vector is a product and the search
    // falls back to the minimum eigenvector
    let o = min_schmidt_rank_quadratic(c, 1, cfg, &[])?;
    let sd = schmidt_decompose(&o.vector, d1, d2)?;
    let (x, y) = match (sd.left.first(), sd.right.first()) {
        (Some(l), Some(r)) => (l * C64::new(sd.coefficients[0], 0.0), r.clone()),
        _ => (CVector::zeros(d1), CVector::zeros(d2)),
    };
    Ok(BlockMinimum {
        value: o.value,
        x,
        y,
        restarts: o.restarts,
        iterations: o.iterations,
    })
}

fn search_verdict(c: &BipartiteOperator, k: usize, cfg: &SeeSawConfig, warm: &[CVector], method: &str) -> Result<MembershipVerdict> {
    Ok(search_verdict_with_outcome(c, k, cfg, warm, method)?.0)
}

fn search_verdict_with_outcome(
    c: &BipartiteOperator,
    k: usize,
    cfg: &SeeSawConfig,
    warm: &[CVector],
    method: &str,
) -> Result<(MembershipVerdict, CVector)> {
    let o = min_schmidt_rank_quadratic(c, k, cfg, warm)?;
    let best = o.vector.clone();
    let mut diagnostics = Diagnostics::search(method, cfg, &o);
    if o.restarts == 0 {
        diagnostics.exact = true;
        diagnostics.method = format!("{method} (exact: rank bound covers the space)");
        let status = if o.value >= -cfg.exact_tol * c.matrix().spectral_norm().max(1.0) {
            VerdictStatus::Holds
        } else {
            VerdictStatus::Fails
        };
        let witness = (status == VerdictStatus::Fails).then_some(Witness::Vector(o.vector));
        let v = MembershipVerdict {
            status,
            margin: o.value,
            witness,
            diagnostics,
        };
        return Ok((v, best));
    }
    let v = if o.value < cfg.negativity_threshold {
        MembershipVerdict {
            status: VerdictStatus::Fails,
            margin: o.value,
            witness: Some(Witness::Vector(o.vector)),
            diagnostics,
        }
    } else {
        MembershipVerdict {
            status: VerdictStatus::LikelyHolds,
            margin: o.value,
            witness: None,
            diagnostics,
        }
    };
    Ok((v, best))
}

/// k-positivity of `Φ`: `⟨v|C_Φ|v⟩ ≥ 0` for every `v` of Schmidt rank ≤ k.
///
/// The ranks `1, …, k` are searched in turn, each warm-started from the best
/// vector of the previous rank, and the first certified violation is
/// returned. A failure at `k` therefore repeats at every larger `k`.
/// `k ≥ min(dimIn, dimOut)` is the exact complete-positivity test.
pub fn is_k_positive(phi: &LinearMap, k: usize, cfg: &SeeSawConfig) -> Result<MembershipVerdict> {
    is_k_positive_warm(phi, k, cfg, &[])
}

pub fn is_k_positive_warm(phi: &LinearMap, k: usize, cfg: &SeeSawConfig, warm: &[CVector]) -> Result<MembershipVerdict> {
    if k == 0 || k > phi.dim_in() {
        return Err(ConeError::InvalidInput(format!("need 1 <= k <= {}, got {k}", phi.dim_in())));
    }
    let exact_from = phi.dim_in().min(phi.dim_out());
    let mut carried: Vec<CVector> = warm.to_vec();
    let mut last = None;
    for j in 1..=k.min(exact_from) {
        if j == exact_from {
            let mut v = is_completely_positive(phi, cfg.exact_tol);
            v.diagnostics.method = format!("{j}-positivity via choi-spectrum");
            return Ok(v);
        }
        let (v, best) =
            search_verdict_with_outcome(phi.choi(), j, cfg, &carried, &format!("see-saw over Schmidt rank <= {j}"))?;
        if v.fails() {
            return Ok(v);
        }
        carried = vec![best];
        last = Some(v);
    }
    Ok(last.expect("k >= 1"))
}

/// Verdicts for `k = 1 ..= k_max`. Once a rank fails, its witness is reused
/// for every larger rank.
pub fn k_positivity_profile(phi: &LinearMap, k_max: usize, cfg: &SeeSawConfig) -> Result<Vec<MembershipVerdict>> {
    let mut out: Vec<MembershipVerdict> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        if let Some(prev) = out.last().filter(|v| v.fails()).cloned() {
            let mut v = prev;
            v.diagnostics.method = format!("{}-positivity fails by the rank-{} witness", k, k - 1);
            out.push(v);
            continue;
        }
        out.push(is_k_positive(phi, k, cfg)?);
    }
    Ok(out)
}

/// Positivity: `Φ(X) ⪰ 0` whenever `X ⪰ 0`.
pub fn is_positive(phi: &LinearMap, cfg: &SeeSawConfig) -> Result<MembershipVerdict> {
    is_k_positive(phi, 1, cfg)
}

/// `(id₂ ⊗ Φ∘t)(w w*)` for the input `w w*` of the UV construction.
pub fn p2t_witness_output(phi: &LinearMap) -> Result<ComplexMatrix> {
    let input = uv_witness_input();
    let psi = phi.pre_transpose();
    identity_map(2).tensor(&psi)?.apply(input.matrix())
}

/// Membership of `Φ` in `P₂∘t`, i.e. 2-positivity of `Φ∘t`.
///
/// `FAILS` means `Φ ∉ P₂∘t`. For the UV map the search is warm-started from
/// the negative eigenvector of [`p2t_witness_output`], lifted to `C³ ⊗ C³`.
pub fn not_in_p2_circ_t(phi: &LinearMap, cfg: &SeeSawConfig) -> Result<MembershipVerdict> {
    let psi = phi.pre_transpose();
    let mut warm = Vec::new();
    if phi.dim_in() == 3 && phi.dim_out() == 3 && phi.distance(&uv_example_map().map) < 1e-12 {
        let out = p2t_witness_output(phi)?;
        let eig = eig_hermitian_unchecked(&out);
        let eta = eig.min_vector();
        warm.push(CVector::from_fn(9, |idx, _| if idx < 6 { eta[idx] } else { ZERO }));
    }
    let mut v = is_k_positive_warm(&psi, 2, cfg, &warm)?;
    v.diagnostics.method = format!("2-positivity of phi∘t: {}", v.diagnostics.method);
    Ok(v)
}

// ---------------------------------------------------------------------------
// Schmidt number

/// Lower bound on the Schmidt number with its evidence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchmidtBound {
    /// Bound supported by exact tests only.
    pub certified: usize,
    /// Bound after the range-criterion heuristic; never below `certified`.
    pub bound: usize,
    pub evidence: Vec<String>,
}

/// Lower bound from the partial transpose, generalized reduction witnesses
/// `Tr(X) I − X/k` on either side, and, if neither fires, a product-vector
/// search in the range of `X`.
pub fn schmidt_number_lower_bound(x: &BipartiteOperator, cfg: &SeeSawConfig) -> Result<SchmidtBound> {
    let tol = cfg.exact_tol;
    require_psd(x, tol)?;
    let (da, db) = (x.dim_a(), x.dim_b());
    let mut certified = 1;
    let mut evidence = Vec::new();
    let ppt = is_ppt(x, tol)?;
    if ppt.fails() {
        certified = 2;
        evidence.push(format!("partial transpose has eigenvalue {:.6e}", ppt.margin));
    }
    let m = x.matrix();
    let tr_b = partial_trace_matrix(m, da, db, Subsystem::B);
    let tr_a = partial_trace_matrix(m, da, db, Subsystem::A);
    for k in 1..da.min(db) {
        let inv = 1.0 / k as f64;
        let sides = [
            ("B", tensor(&tr_b, &ComplexMatrix::identity(db))? - m.scale(inv)),
            ("A", tensor(&ComplexMatrix::identity(da), &tr_a)? - m.scale(inv)),
        ];
        for (side, y) in sides {
            let eig = eig_hermitian_unchecked(&y);
            let check = crate::linops::psd_from_eig(&eig, tol);
            if !check.psd && k + 1 > certified {
                certified = k + 1;
                evidence.push(format!(
                    "k-positive witness Tr(.)I - ./{k} on {side} gives eigenvalue {:.6e}",
                    check.min_eigenvalue
                ));
            }
        }
    }
    let mut bound = certified;
    if certified == 1 {
        let proj = range_projection(m, Tolerances::default().rank);
        let rank = crate::linops::numerical_rank(m, Tolerances::default().rank);
        if rank < da * db {
            let p = BipartiteOperator::from_matrix(da, db, proj, 1e-8)?;
            let found = product_vector_in_subspace(&p, cfg)?;
            if found.vector.is_none() && found.best_overlap < 1.0 - 1e-3 {
                bound = 2;
                evidence.push(format!(
                    "range criterion (heuristic): best product-vector overlap {:.6} over {} restarts",
                    found.best_overlap, found.restarts
                ));
            }
        }
    }
    Ok(SchmidtBound {
        certified,
        bound,
        evidence,
    })
}

/// Vectors of Schmidt rank ≤ k whose Gram sum reconstructs an operator.
#[derive(Clone, Debug, Serialize)]
pub struct SchmidtCertificate {
    pub k: usize,
    #[serde(skip)]
    pub vectors: Vec<CVector>,
    pub residual: f64,
}

impl SchmidtCertificate {
    /// Recomputes the residual and the Schmidt ranks from scratch.
    pub fn verify(&self, x: &BipartiteOperator) -> bool {
        let (da, db) = (x.dim_a(), x.dim_b());
        self.vectors.iter().all(|v| schmidt_rank(v, da, db) <= self.k)
            && gram_residual(&self.vectors, x.matrix()) < 1e-8
    }
}

fn gram_residual(vectors: &[CVector], x: &ComplexMatrix) -> f64 {
    let n = x.rows();
    let sum = vectors
        .iter()
        .fold(ComplexMatrix::zeros(n, n), |acc, v| acc + ComplexMatrix::outer(v, v));
    (sum - x).frobenius_norm() / x.frobenius_norm().max(f64::MIN_POSITIVE)
}

fn truncate_column(col: &CVector, da: usize, db: usize, k: usize) -> CVector {
    match schmidt_decompose(col, da, db) {
        Ok(sd) => sd.truncated(k).reconstruct(da, db),
        Err(_) => col.clone(),
    }
}

/// Polar factor `P Q*` of `M = P S Q*`.
fn polar(m: &DMatrix<C64>) -> DMatrix<C64> {
    let s = svd(&ComplexMatrix::from(m.clone()));
    (&s.u * &s.v.adjoint()).into_inner()
}

/// Alternating search for `X = Σ_i v_i v_i*` with every `v_i` of Schmidt
/// rank at most `k`. A returned certificate is rigorous; `None` makes no
/// claim.
pub fn schmidt_number_upper_bound_search(
    x: &BipartiteOperator,
    k: usize,
    cfg: &SeeSawConfig,
    warm: Option<&[CVector]>,
) -> Result<Option<SchmidtCertificate>> {
    cfg.validate()?;
    require_psd(x, cfg.exact_tol)?;
    let (da, db) = (x.dim_a(), x.dim_b());
    let n = da * db;
    if k == 0 {
        return Err(ConeError::InvalidInput("k must be at least 1".into()));
    }
    if let Some(w) = warm {
        if w.iter().any(|v| v.len() != n) {
            return Err(ConeError::DimensionMismatch("warm-start vector of wrong length".into()));
        }
        let cert = SchmidtCertificate {
            k,
            vectors: w.to_vec(),
            residual: gram_residual(w, x.matrix()),
        };
        if cert.verify(x) {
            return Ok(Some(cert));
        }
    }
    let eig = eig_hermitian(x.op());
    let top = eig.values.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Ok(Some(SchmidtCertificate {
            k,
            vectors: vec![],
            residual: 0.0,
        }));
    }
    let r = eig.values.iter().filter(|&&l| l > Tolerances::default().rank * top).count();
    let g = DMatrix::from_fn(n, r, |i, j| eig.vectors[(i, j)] * eig.values[j].sqrt());
    if k >= da.min(db) {
        let vectors = (0..r).map(|j| g.column(j).into_owned()).collect::<Vec<_>>();
        let residual = gram_residual(&vectors, x.matrix());
        return Ok(Some(SchmidtCertificate { k, vectors, residual }));
    }
    let ga = g.adjoint();
    let widths: Vec<usize> = match warm {
        Some(w) if w.len() >= r => vec![w.len()],
        _ => vec![r, 2 * r],
    };
    for (attempt, &width) in widths.iter().enumerate() {
        let restarts = if warm.is_some() { 1 } else { cfg.restarts.min(8) };
        let found = (0..restarts).into_par_iter().map(|rs| {
            let w0 = match warm {
                Some(w) => DMatrix::from_fn(n, width, |i, j| w[j][i]),
                None => {
                    let mut rng = seeded_rng(cfg.seed, (attempt * 1000 + rs) as u64);
                    crate::catalog::gaussian_matrix(n, width, &mut rng).into_inner()
                }
            };
            let mut u = polar(&(&ga * &w0));
            for _ in 0..cfg.max_iters * 25 {
                let w = &g * &u;
                let cols: Vec<CVector> = (0..width)
                    .map(|j| truncate_column(&w.column(j).into_owned(), da, db, k))
                    .collect();
                let residual = gram_residual(&cols, x.matrix());
                if residual < 1e-10 {
                    return Some(SchmidtCertificate { k, vectors: cols, residual });
                }
                let wt = DMatrix::from_fn(n, width, |i, j| cols[j][i]);
                u = polar(&(&ga * &wt));
            }
            None
        });
        let results: Vec<Option<SchmidtCertificate>> = found.collect();
        if let Some(cert) = results.into_iter().flatten().next() {
            if cert.verify(x) {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// dual cones and ranges

/// Best overlap of a unit product vector with a subspace.
#[derive(Clone, Debug)]
pub struct ProductSearch {
    /// A product vector `x ⊗ y` with `‖P(x⊗y)‖ > 1 − 1e−9`, if one was found.
    pub vector: Option<(CVector, CVector)>,
    /// Largest `‖P(x⊗y)‖` seen.
    pub best_overlap: f64,
    pub restarts: usize,
}

/// Searches the range of the projection `p` for a product vector.
pub fn product_vector_in_subspace(p: &BipartiteOperator, cfg: &SeeSawConfig) -> Result<ProductSearch> {
    let neg = BipartiteOperator::from_matrix(p.dim_a(), p.dim_b(), -p.matrix(), 0.0)?;
    let o = block_positivity_min(&neg, cfg)?;
    let best = (-o.value).max(0.0).sqrt();
    let vector = (best > 1.0 - 1e-9).then(|| {
        let nx = o.x.norm();
        (o.x / C64::new(nx, 0.0), o.y)
    });
    Ok(ProductSearch {
        vector,
        best_overlap: best,
        restarts: o.restarts,
    })
}

/// Positivity of `Ψ ⊗ Φ` for a symmetric `Φ = Φ† = t∘Φ∘t`.
pub fn dual_cone_membership(psi: &LinearMap, phi: &LinearMap, cfg: &SeeSawConfig) -> Result<MembershipVerdict> {
    let sym = phi.distance(&phi.dual()).max(phi.distance(&phi.transpose_conjugate()));
    if sym > 1e-10 {
        return Err(ConeError::SymmetryViolation { deviation: sym });
    }
    for d in [psi.dim_in() * phi.dim_in(), psi.dim_out() * phi.dim_out()] {
        if d > TENSOR_SIDE_CAP {
            return Err(ConeError::DimensionCap {
                requested: d,
                cap: TENSOR_SIDE_CAP,
            });
        }
    }
    let theta = psi.tensor(phi)?;
    search_verdict(theta.choi(), 1, cfg, &[], "see-saw on the Choi matrix of psi⊗phi")
}
