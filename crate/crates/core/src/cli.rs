//! The `conekit` command line.
//!
//! Every command prints a JSON report on stdout and, unless `--json` is
//! given, a one-line summary on stderr. Exit codes: 0 when the checked
//! property holds (or every demo claim passes), 1 when it fails, 2 on error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{
    self, by_name, identity_map, random_spk_map, reduction_map, spin_projection_e, spin_projection_f, tau_prime,
    tiles_upb, trace_map, transpose_map, upb_complement_state, uv_example_map, SpinSystem, PRNG_ALGORITHM,
};
use crate::classify2::{classify_n2, typical_cones_n2};
use crate::cones::{
    block_positivity_min, is_completely_copositive, is_completely_positive, is_k_positive, is_ppt,
    is_separable_2x2, not_in_p2_circ_t, p2t_witness_output, product_vector_in_subspace, schmidt_number_lower_bound,
    schmidt_number_upper_bound_search, MembershipVerdict, SeeSawConfig, VerdictStatus,
};
use crate::error::{ConeError, Result};
use crate::generate::{
    default_seed, schmidt_pair_from_vector, schmidt_pairs_from_kraus, sp2_via_reduction, spk_generation_certificate,
    GenerationCertificate,
};
use crate::linops::{
    eig_hermitian_unchecked, numerical_rank, range_projection, singular_values, support_projection, tensor,
    BipartiteOperator, ComplexMatrix, Tolerances,
};
use crate::order::{detection_dominance, finer_not_dominant_demo, is_finer, t_dominates_r_demo, StateSampler};
use crate::posmaps::{KrausDecomposition, LinearMap};

/// Version of the report layout.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TolProfile {
    Default,
    Strict,
}

impl TolProfile {
    pub fn tolerances(&self) -> Tolerances {
        match self {
            TolProfile::Default => Tolerances::default(),
            TolProfile::Strict => Tolerances::strict(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "conekit", version, about = "Positive maps, mapping cones and their certificates")]
pub struct Cli {
    /// Seed for every randomized search and sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = TolProfile::Default)]
    pub tol_profile: TolProfile,
    /// Suppress the human-readable summary line.
    #[arg(long, global = true)]
    pub json: bool,
    /// Restarts for see-saw searches.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Dimension for dimension-free catalog names.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cone membership: cp, ccp, ppt, sep2x2, kpos:<k>, pos.
    Check { kind: String, input: String },
    /// Typicality of the cone generated by a qubit map.
    Classify2 {
        #[arg(long = "map")]
        map: Option<String>,
        input: Option<String>,
    },
    /// Generation certificates: spk:<k> or sp2-reduction.
    Decompose {
        kind: String,
        #[arg(long)]
        seeded_map: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scripted reproductions: uv-witness, tiles, spin:<n>, t-vs-R,
    /// finer-not-dominant, four-cones.
    Demo {
        name: String,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// The dominance order and the finer-than relation.
    Order {
        #[command(subcommand)]
        command: OrderCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum OrderCommand {
    Finer {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
    },
    Demo {
        name: String,
        #[arg(long)]
        samples: Option<usize>,
    },
}

/// One checked statement inside a report.
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub name: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

impl Claim {
    fn check(name: impl Into<String>, pass: bool, margin: Option<f64>) -> Self {
        Claim {
            name: name.into(),
            status: if pass { "PASS" } else { "FAIL" },
            margin,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "PASS"
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub version: &'static str,
    pub seed: u64,
    pub prng: &'static str,
    pub tol_profile: TolProfile,
    pub claims: Vec<Claim>,
    pub result: Value,
}

/// Captured result of one invocation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    seed: u64,
    profile: TolProfile,
    tol: Tolerances,
    restarts: Option<usize>,
    n: Option<usize>,
}

impl Ctx {
    fn cfg(&self) -> SeeSawConfig {
        let mut c = SeeSawConfig::with_seed(self.seed);
        if let Some(r) = self.restarts {
            c.restarts = r;
        }
        c.exact_tol = self.tol.psd;
        c
    }

    fn cfg_with_restarts(&self, default: usize) -> SeeSawConfig {
        let mut c = self.cfg();
        c.restarts = self.restarts.unwrap_or(default);
        c
    }
}

/// Runs the command line against the process arguments and returns the
/// exit code.
pub fn run() -> i32 {
    let out = execute(std::env::args());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.exit_code
}

/// Parses and runs `args` (including the program name) without touching
/// the process streams.
pub fn execute<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome {
                exit_code: code,
                stdout: if code == 0 { e.to_string() } else { String::new() },
                stderr: if code == 0 { String::new() } else { e.to_string() },
            };
        }
    };
    let command = args.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    let ctx = Ctx {
        seed: cli.seed,
        profile: cli.tol_profile,
        tol: cli.tol_profile.tolerances(),
        restarts: cli.restarts,
        n: cli.n,
    };
    let mut report = RunReport {
        schema: REPORT_SCHEMA,
        command: command.clone(),
        version: env!("CARGO_PKG_VERSION"),
        seed: ctx.seed,
        prng: PRNG_ALGORITHM,
        tol_profile: ctx.profile,
        claims: Vec::new(),
        result: Value::Null,
    };
    match dispatch(&cli.command, &ctx, &mut report) {
        Ok((code, summary)) => Outcome {
            exit_code: code,
            stdout: to_json(&report),
            stderr: if cli.json { String::new() } else { format!("{command}: {summary}\n") },
        },
        Err(e) => {
            report.result = json!({"error": {"code": e.code(), "message": e.to_string()}});
            Outcome {
                exit_code: 2,
                stdout: to_json(&report),
                stderr: format!("error [{}]: {e}\n", e.code()),
            }
        }
    }
}

fn to_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

fn dispatch(command: &Command, ctx: &Ctx, report: &mut RunReport) -> Result<(i32, String)> {
    match command {
        Command::Check { kind, input } => cmd_check(kind, input, ctx, report),
        Command::Classify2 { map, input } => {
            let name = map
                .as_ref()
                .or(input.as_ref())
                .ok_or_else(|| ConeError::InvalidInput("classify2 needs a map (positional or --map)".into()))?;
            cmd_classify2(name, ctx, report)
        }
        Command::Decompose { kind, seeded_map, out } => cmd_decompose(kind, seeded_map, out.as_deref(), ctx, report),
        Command::Demo { name, samples } => cmd_demo(name, *samples, ctx, report),
        Command::Order { command } => match command {
            OrderCommand::Finer { phi, psi } => {
                let phi = load_map(phi, ctx.n.unwrap_or(3))?;
                let psi = load_map(psi, ctx.n.unwrap_or(3))?;
                let v = is_finer(&phi, &psi, ctx.tol.psd)?;
                report.result = serde_json::to_value(&v)?;
                Ok(verdict_exit(&v))
            }
            OrderCommand::Demo { name, samples } => match name.as_str() {
                "t-vs-R" | "finer-not-dominant" => cmd_demo(name, *samples, ctx, report),
                other => Err(ConeError::InvalidInput(format!("unknown order demo `{other}`"))),
            },
        },
    }
}

fn verdict_exit(v: &MembershipVerdict) -> (i32, String) {
    let code = if v.fails() { 1 } else { 0 };
    (code, format!("{} (margin {:.6e})", v.status, v.margin))
}

fn claims_exit(claims: &[Claim]) -> (i32, String) {
    let failed = claims.iter().filter(|c| !c.passed()).count();
    if failed == 0 {
        (0, format!("{} claims passed", claims.len()))
    } else {
        (1, format!("{failed} of {} claims FAILED", claims.len()))
    }
}

// ---------------------------------------------------------------------------
// inputs

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// A map from a JSON file (map layout, or a state read as a Choi matrix)
/// or a catalog name.
pub fn load_map(input: &str, n: usize) -> Result<LinearMap> {
    let path = Path::new(input);
    if path.is_file() {
        let v = read_json(path)?;
        if v.get("dimIn").is_some() {
            return Ok(serde_json::from_value(v)?);
        }
        if v.get("dimA").is_some() {
            let x: BipartiteOperator = serde_json::from_value(v)?;
            return Ok(crate::posmaps::map_from_choi(x));
        }
        return Err(ConeError::InvalidInput(format!("{input}: neither a map nor a bipartite operator")));
    }
    by_name(input, n)
}

/// A bipartite operator from a JSON file or, for catalog names, the Choi
/// matrix of the named map.
pub fn load_state(input: &str, n: usize) -> Result<BipartiteOperator> {
    Ok(load_map(input, n)?.choi().clone())
}

// ---------------------------------------------------------------------------
// commands

fn cmd_check(kind: &str, input: &str, ctx: &Ctx, report: &mut RunReport) -> Result<(i32, String)> {
    let n = ctx.n.unwrap_or(3);
    let cfg = ctx.cfg();
    let v = match kind {
        "cp" => is_completely_positive(&load_map(input, n)?, ctx.tol.psd),
        "ccp" => is_completely_copositive(&load_map(input, n)?, ctx.tol.psd),
        "ppt" => is_ppt(&load_state(input, n)?, ctx.tol.psd)?,
        "sep2x2" => is_separable_2x2(&load_state(input, n)?, ctx.tol.psd)?,
        "pos" => is_k_positive(&load_map(input, n)?, 1, &cfg)?,
        other => match other.strip_prefix("kpos:") {
            Some(k) => {
                let k = k
                    .parse::<usize>()
                    .map_err(|_| ConeError::InvalidInput(format!("bad rank in `{other}`")))?;
                is_k_positive(&load_map(input, n)?, k, &cfg)?
            }
            None => return Err(ConeError::InvalidInput(format!("unknown check `{other}`"))),
        },
    };
    report.result = serde_json::to_value(&v)?;
    Ok(verdict_exit(&v))
}

fn cmd_classify2(input: &str, ctx: &Ctx, report: &mut RunReport) -> Result<(i32, String)> {
    let phi = load_map(input, ctx.n.unwrap_or(2))?;
    let c = classify_n2(&phi, &ctx.tol, &ctx.cfg())?;
    report.result = serde_json::to_value(&c)?;
    Ok((0, format!("{} ({})", c.label, c.case_branch.as_char())))
}

/// The Kraus family behind a map: construction data for `spk:` names,
/// otherwise the eigendecomposition of the Choi matrix.
fn kraus_for(input: &str, ctx: &Ctx) -> Result<(LinearMap, KrausDecomposition)> {
    let parts: Vec<&str> = input.split(':').collect();
    if parts.len() == 5 && parts[0] == "spk" && !Path::new(input).is_file() {
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| ConeError::InvalidInput(format!("bad parameter in `{input}`")))
        };
        return random_spk_map(num(parts[1])?, num(parts[2])?, num(parts[3])?, num(parts[4])? as u64);
    }
    let map = load_map(input, ctx.n.unwrap_or(3))?;
    let kraus = map.kraus(ctx.tol.psd)?;
    Ok((map, kraus))
}

fn cmd_decompose(kind: &str, input: &str, out: Option<&Path>, ctx: &Ctx, report: &mut RunReport) -> Result<(i32, String)> {
    let (map, kraus) = kraus_for(input, ctx)?;
    let cert: GenerationCertificate = if let Some(k) = kind.strip_prefix("spk:") {
        let k = k
            .parse::<usize>()
            .map_err(|_| ConeError::InvalidInput(format!("bad rank in `{kind}`")))?;
        if k == 0 || k > map.dim_in() {
            return Err(ConeError::InvalidInput(format!("seed rank {k} out of range")));
        }
        spk_generation_certificate(&kraus, &default_seed(map.dim_in(), k))?
    } else if kind == "sp2-reduction" {
        let pairs = match schmidt_pairs_from_kraus(&kraus) {
            Ok(p) => p,
            Err(ConeError::RankTooHigh { .. }) => {
                let found = schmidt_number_upper_bound_search(map.choi(), 2, &ctx.cfg_with_restarts(8), None)?
                    .ok_or(ConeError::RankTooHigh {
                        rank: kraus.max_rank(),
                        k: 2,
                    })?;
                found
                    .vectors
                    .iter()
                    .map(|v| schmidt_pair_from_vector(v, map.dim_in(), map.dim_out()))
                    .collect::<Result<Vec<_>>>()?
            }
            Err(e) => return Err(e),
        };
        sp2_via_reduction(&pairs)?
    } else {
        return Err(ConeError::InvalidInput(format!("unknown decomposition `{kind}`")));
    };
    let err = cert.verify(&map)?;
    report.claims.push(Claim::check("certificate reproduces the target Choi matrix", true, Some(err)));
    let cert_json = serde_json::to_value(&cert)?;
    match out {
        Some(path) => {
            let mut text = serde_json::to_string_pretty(&cert_json)?;
            text.push('\n');
            std::fs::write(path, text)?;
            report.result = json!({"pairs": cert.pairs.len(), "reconstructionError": err, "certificateFile": path.display().to_string()});
        }
        None => {
            report.result = json!({"pairs": cert.pairs.len(), "reconstructionError": err, "certificate": cert_json});
        }
    }
    Ok((0, format!("certificate with {} pairs, error {:.3e}", cert.pairs.len(), err)))
}

fn cmd_demo(name: &str, samples: Option<usize>, ctx: &Ctx, report: &mut RunReport) -> Result<(i32, String)> {
    let (claims, result) = match name {
        "uv-witness" => demo_uv(ctx)?,
        "tiles" => demo_tiles(ctx)?,
        "t-vs-R" => demo_t_vs_r(samples.unwrap_or(200), ctx)?,
        "finer-not-dominant" => demo_finer(ctx.n.unwrap_or(3), samples.unwrap_or(20), ctx)?,
        "four-cones" => demo_four_cones(ctx)?,
        other => match other.strip_prefix("spin:") {
            Some(n) => {
                let n = n
                    .parse::<usize>()
                    .map_err(|_| ConeError::InvalidInput(format!("bad spin count in `{other}`")))?;
                demo_spin(n)?
            }
            None => return Err(ConeError::InvalidInput(format!("unknown demo `{other}`"))),
        },
    };
    report.claims = claims;
    report.result = result;
    Ok(claims_exit(&report.claims))
}

fn demo_uv(ctx: &Ctx) -> Result<(Vec<Claim>, Value)> {
    let ex = uv_example_map();
    let rt = ctx.tol.rank;
    let ru = range_projection(&ex.u, rt);
    let rv = range_projection(&ex.v, rt);
    let commute = (&ru * &rv - &rv * &ru).frobenius_norm();
    let supports = support_projection(&ex.u, rt).rel_distance(&ru).max(support_projection(&ex.v, rt).rel_distance(&ru));
    let block = block_positivity_min(ex.map.choi(), &ctx.cfg_with_restarts(200))?;
    let out = p2t_witness_output(&ex.map)?;
    let min = eig_hermitian_unchecked(&out).min_value();
    let verdict = not_in_p2_circ_t(&ex.map, &ctx.cfg())?;
    let claims = vec![
        Claim::check("rank U = rank V = 2", numerical_rank(&ex.u, rt) == 2 && numerical_rank(&ex.v, rt) == 2, None),
        Claim::check("range projections of U and V commute", commute < 1e-12, Some(commute)),
        Claim::check("supports of U and V equal range(U)", supports < 1e-12, Some(supports)),
        Claim::check("range(U) != range(V)", ru.rel_distance(&rv) > 0.1, Some(ru.rel_distance(&rv))),
        Claim::check("phi positive: block minimum >= -1e-9", block.value >= -1e-9, Some(block.value)),
        Claim::check("(id2 ⊗ phi∘t)(w w*) has a negative eigenvalue", min < -1e-7, Some(min)),
        Claim::check("phi not in P2∘t (certified witness)", verdict.fails(), Some(verdict.margin)),
    ];
    let result = json!({"witnessOutput": out, "witnessMinEigenvalue": min, "p2t": verdict});
    Ok((claims, result))
}

fn demo_tiles(ctx: &Ctx) -> Result<(Vec<Claim>, Value)> {
    let upb = tiles_upb();
    let gram_err = upb.gram().rel_distance(&ComplexMatrix::identity(5));
    let rho = upb_complement_state(&upb);
    let s = singular_values(rho.matrix());
    let gap = (s[3] / s[4].max(f64::MIN_POSITIVE)).log10();
    let ppt = is_ppt(&rho, ctx.tol.psd)?;
    let cfg = ctx.cfg_with_restarts(500);
    let proj = BipartiteOperator::from_matrix(3, 3, range_projection(rho.matrix(), ctx.tol.rank), 1e-8)?;
    let search = product_vector_in_subspace(&proj, &cfg)?;
    let bound = schmidt_number_lower_bound(&rho, &cfg)?;
    let claims = vec![
        Claim::check("Gram matrix is the identity", gram_err < 1e-12, Some(gram_err)),
        Claim::check("rank(rho) = 4 with a gap of at least 6 decades", numerical_rank(rho.matrix(), ctx.tol.rank) == 4 && gap >= 6.0, Some(gap)),
        Claim::check("rho is PPT", ppt.holds() && ppt.margin >= -1e-10, Some(ppt.margin)),
        Claim::check("no product vector in range(rho)", search.vector.is_none() && search.best_overlap < 1.0 - 1e-3, Some(search.best_overlap)),
        Claim::check("Schmidt number lower bound >= 2", bound.bound >= 2, Some(bound.bound as f64)),
    ];
    let result = json!({"singularValues": s, "ppt": ppt, "bestOverlap": search.best_overlap, "restarts": search.restarts, "schmidtBound": bound});
    Ok((claims, result))
}

/// Invariant checks for `n` spins: anticommutation, normalized-trace
/// orthonormality, and the projections `E_k`, `F_k`.
pub fn spin_claims(n: usize) -> Result<Vec<Claim>> {
    let sys = SpinSystem::new(n)?;
    let d = sys.dim();
    let id = ComplexMatrix::identity(d);
    let mut anti = 0.0f64;
    let mut ortho = 0.0f64;
    for i in 1..=2 * n {
        for j in 1..=2 * n {
            let (si, sj) = (sys.s(i), sys.s(j));
            let want = if i == j { id.scale(2.0) } else { ComplexMatrix::zeros(d, d) };
            anti = anti.max((&si * &sj + &sj * &si - want).frobenius_norm());
            let t = catalog::tau(&(&si * &sj));
            ortho = ortho.max((t.re - if i == j { 1.0 } else { 0.0 }).abs().max(t.im.abs()));
        }
    }
    let mut idem = 0.0f64;
    let mut dual = 0.0f64;
    let mut unital = 0.0f64;
    let mut nest = 0.0f64;
    let mut f_err = 0.0f64;
    let m = 2;
    for k in 0..=2 * n {
        let ek = spin_projection_e(&sys, k)?;
        idem = idem.max(ek.compose(&ek)?.distance(&ek));
        dual = dual.max(ek.dual().distance(&ek));
        unital = unital.max(ek.apply(&id)?.rel_distance(&id));
        if k < 2 * n {
            let next = spin_projection_e(&sys, k + 1)?;
            nest = nest.max(ek.compose(&next)?.distance(&ek));
        }
        let fk = spin_projection_f(&sys, k, m)?;
        let ops: Vec<ComplexMatrix> = (0..=k)
            .map(|i| tensor(&sys.s(i), &ComplexMatrix::identity(m)))
            .collect::<Result<_>>()?;
        let direct = LinearMap::from_action(d * m, d * m, |x| {
            ops.iter().fold(ComplexMatrix::zeros(d * m, d * m), |acc, s| acc + s.scale_complex(catalog::tau(&(s * x))))
        })?;
        f_err = f_err.max(fk.distance(&direct)).max(fk.distance(&ek.tensor(&tau_prime(m))?));
    }
    Ok(vec![
        Claim::check("s_i s_j + s_j s_i = 2 δ_ij I", anti < 1e-12, Some(anti)),
        Claim::check("τ(s_i s_j) = δ_ij", ortho < 1e-12, Some(ortho)),
        Claim::check("E_k idempotent", idem < 1e-10, Some(idem)),
        Claim::check("E_k self-dual", dual < 1e-10, Some(dual)),
        Claim::check("E_k unital", unital < 1e-10, Some(unital)),
        Claim::check("E_k ∘ E_(k+1) = E_k", nest < 1e-10, Some(nest)),
        Claim::check("F_k = E_k ⊗ τ′", f_err < 1e-10, Some(f_err)),
    ])
}

fn demo_spin(n: usize) -> Result<(Vec<Claim>, Value)> {
    let claims = spin_claims(n)?;
    Ok((claims, json!({"n": n, "dimension": 1usize << n})))
}

fn demo_t_vs_r(samples: usize, ctx: &Ctx) -> Result<(Vec<Claim>, Value)> {
    let (dom, cp) = t_dominates_r_demo(3)?;
    let t = transpose_map(3);
    let r = reduction_map(3);
    let fwd = detection_dominance(&t, &r, StateSampler::Biased, samples, ctx.seed, Some(&dom.certificate))?;
    let rev = detection_dominance(&r, &t, StateSampler::Biased, samples, ctx.seed, None)?;
    let claims = vec![
        Claim::check("certificate reconstructs R", dom.reconstruction_error < 1e-10, Some(dom.reconstruction_error)),
        Claim::check("R∘t is completely positive", cp.status == VerdictStatus::Holds, Some(cp.margin)),
        Claim::check("every inner factor is the identity", dom.certificate.pairs.iter().all(|p| p.b == ComplexMatrix::identity(3)), None),
        Claim::check("every R-detection is a t-detection", fwd.violations == 0, Some(fwd.violations as f64)),
        Claim::check("certificate check agrees with the batch", fwd.certificate_disagreements == Some(0), None),
        Claim::check("some t-detection is missed by R", rev.violations >= 1, Some(rev.violations as f64)),
    ];
    let result = json!({"pairs": dom.certificate.pairs.len(), "forward": fwd, "reverse": rev});
    Ok((claims, result))
}

fn demo_finer(n: usize, samples: usize, ctx: &Ctx) -> Result<(Vec<Claim>, Value)> {
    let rep = finer_not_dominant_demo(n, samples, &ctx.cfg())?;
    let claims = vec![
        Claim::check("phi positive", rep.phi_positive.holds(), Some(rep.phi_positive.margin)),
        Claim::check("phi not completely positive", rep.phi_cp.fails(), Some(rep.phi_cp.margin)),
        Claim::check("phi finer than phi + omega", rep.finer.holds(), Some(rep.finer.margin)),
        Claim::check("Ad_A∘phi = Ad_(A P1)∘phi", rep.identity_max_error < 1e-11, Some(rep.identity_max_error)),
        Claim::check("omega adds a nonzero CP part", rep.omega_choi_norm > 0.0, Some(rep.omega_choi_norm)),
    ];
    let result = json!({
        "n": rep.n,
        "samples": rep.samples,
        "phiPositive": rep.phi_positive,
        "phiCp": rep.phi_cp,
        "finer": rep.finer,
        "nonDominance": rep.non_dominance,
    });
    Ok((claims, result))
}

fn demo_four_cones(ctx: &Ctx) -> Result<(Vec<Claim>, Value)> {
    let cfg = ctx.cfg();
    let maps = [
        ("id", identity_map(2), [true, true, false, false]),
        ("t", transpose_map(2), [true, false, true, false]),
        ("trace", trace_map(2), [true, true, true, true]),
        ("reduction", reduction_map(2), [true, false, true, false]),
    ];
    let cones = typical_cones_n2();
    let mut rows = Vec::new();
    let mut claims = Vec::new();
    for (name, phi, expected) in &maps {
        let mut row = serde_json::Map::new();
        for (cone, want) in cones.iter().zip(expected) {
            let v = cone.cone.membership(phi, &ctx.tol, &cfg)?;
            claims.push(Claim::check(format!("{name} in {}: {want}", cone.name), v.holds() == *want, Some(v.margin)));
            row.insert(cone.name.to_string(), Value::String(v.status.to_string()));
        }
        rows.push(json!({"map": name, "membership": row}));
    }
    Ok((claims, json!({"cones": cones, "table": rows})))
}
