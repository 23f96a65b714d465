//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! Exits non-zero on any failure except the one analysed below: criterion 7
//! lists `id + Ad_diag(1,-1)` as untypical, but that map is `2·diag(X)`,
//! whose Choi matrix is separable, so it generates SP1. The criterion is
//! evaluated as written and reported red; the process only tolerates it
//! when the two offending rows are the sole mismatches and both land in
//! SP1 (a).

use std::process::Command;
use std::time::Instant;

use conekit::catalog::{
    choi_map, uv_witness_input, random_spk_map, reduction_map, state_functional,
    tiles_upb, trace_map, transpose_map, upb_complement_state, uv_example_map,
};
use conekit::classify2::{battery_fixtures, classification_battery, classify_n2, CaseBranch, N2Label};
use conekit::cli::{execute, spin_claims};
use conekit::cones::{
    block_positivity_min, is_k_positive, is_ppt, product_vector_in_subspace, schmidt_number_lower_bound,
    schmidt_rank, SeeSawConfig, VerdictStatus,
};
use conekit::generate::{
    antisymmetric_expansion, choi_of_reduction_transpose, default_seed, schmidt_pairs_from_kraus, sp2_via_reduction,
    spk_generation_certificate, GenerationCertificate,
};
use conekit::linops::{
    eig_hermitian, numerical_rank, partial_transpose, range_projection, singular_values, support_projection, tensor, Subsystem,
};
use conekit::order::{detection_dominance, finer_not_dominant_demo, t_dominates_r_demo, StateSampler};
use conekit::{BipartiteOperator, ComplexMatrix, HermitianOperator, LinearMap, Result, Tolerances, C64};

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when the failure is the analysed, tolerated one.
    known_defect: bool,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail, known_defect: false }
    }
}

/// Relative Frobenius error of the Choi matrix a certificate produces,
/// rebuilt with the congruence `(Bᵗ ⊗ A) C (Bᵗ ⊗ A)*` rather than the
/// library's evaluator.
fn congruence_error(cert: &GenerationCertificate, target: &LinearMap) -> f64 {
    let c = cert.seed_map.choi_matrix();
    let n = target.dim_in() * target.dim_out();
    let sum = cert.pairs.iter().fold(ComplexMatrix::zeros(n, n), |acc, p| {
        let k = tensor(&p.b.transpose(), &p.a).expect("small");
        acc + &k * c * k.adjoint()
    });
    sum.rel_distance(target.choi_matrix())
}

fn criterion_1() -> Result<Outcome> {
    let mut worst_eig = 0.0f64;
    let mut exact = true;
    for n in 2..=4 {
        let c = choi_of_reduction_transpose(n)?;
        let expected = ComplexMatrix::from_fn(n * n, n * n, |r, s| {
            let (i, j) = (r / n, r % n);
            let (k, l) = (s / n, s % n);
            let id = if r == s { 1.0 } else { 0.0 };
            let swap = if i == l && j == k { 1.0 } else { 0.0 };
            C64::new(id - swap, 0.0)
        });
        exact &= c.matrix() == &expected;
        exact &= antisymmetric_expansion(n).matrix() == &expected;
        for &v in eig_hermitian(c.op()).values.iter() {
            worst_eig = worst_eig.max(v.abs().min((v - 2.0).abs()));
        }
    }
    Ok(Outcome::new(
        exact && worst_eig < 1e-12,
        format!("entrywise exact: {exact}, eigenvalue distance to {{0,2}}: {worst_eig:.1e}"),
    ))
}

fn criterion_2() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in [3, 4] {
        for i in 0..100u64 {
            let (map, kraus) = random_spk_map(n, 2, 1 + (i as usize % 4), 1000 * n as u64 + i)?;
            let cert = sp2_via_reduction(&schmidt_pairs_from_kraus(&kraus)?)?;
            worst = worst.max(congruence_error(&cert, &map)).max(cert.verify(&map)?);
            count += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome::new(
        worst < 1e-9 && secs < 30.0,
        format!("{count} maps, worst relative error {worst:.1e}, {secs:.1}s"),
    ))
}

fn criterion_3() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut max_excess = 0i64;
    let mut count = 0;
    for n in [3, 4] {
        for k in 1..=3 {
            for i in 0..100u64 {
                let (map, kraus) = random_spk_map(n, k, 1 + (i as usize % 5), 7919 * (n * 10 + k) as u64 + i)?;
                let cert = spk_generation_certificate(&kraus, &default_seed(n, k))?;
                worst = worst.max(congruence_error(&cert, &map));
                for p in &cert.pairs {
                    let r = numerical_rank(&p.a, 1e-9).max(numerical_rank(&p.b, 1e-9));
                    max_excess = max_excess.max(r as i64 - k as i64);
                }
                count += 1;
            }
        }
    }
    Ok(Outcome::new(
        worst < 1e-9 && max_excess <= 0,
        format!("{count} families, worst error {worst:.1e}, factor rank excess {max_excess}"),
    ))
}

fn criterion_4() -> Result<Outcome> {
    let r = reduction_map(3);
    let cfg = SeeSawConfig::with_seed(0);
    let two = is_k_positive(&r, 2, &cfg)?;
    let (value, rank) = match two.witness.as_ref().and_then(|w| w.as_vector()) {
        Some(v) => (r.choi_matrix().quadratic_form(v).re / v.norm_squared(), schmidt_rank(v, 3, 3)),
        None => (f64::NAN, 0),
    };
    let one = is_k_positive(&r, 1, &cfg.clone().with_restarts(50))?;
    Ok(Outcome::new(
        two.status == VerdictStatus::Fails && value < -1e-7 && rank <= 2 && one.status == VerdictStatus::LikelyHolds,
        format!("k=2 {} (re-evaluated {value:.4}, Schmidt rank {rank}); k=1 {}", two.status, one.status),
    ))
}

fn criterion_5() -> Result<Outcome> {
    let phi = choi_map();
    let c = phi.choi();
    let min_c = eig_hermitian(c.op()).min_value();
    let min_pt = eig_hermitian(partial_transpose(c, Subsystem::A).op()).min_value();
    let two = is_k_positive(&phi, 2, &SeeSawConfig::with_seed(0))?;
    let certified = two.fails() && two.recheck(phi.choi_matrix()).is_some_and(|m| m < -1e-7 && (m - two.margin).abs() < 1e-10);
    let block = block_positivity_min(c, &SeeSawConfig::with_seed(0).with_restarts(200))?;
    Ok(Outcome::new(
        min_c < -1e-7 && min_pt < -1e-7 && certified && block.value >= -1e-9,
        format!(
            "min eig C {min_c:.4}, min eig C^Γ {min_pt:.4}, 2-positivity {} (certified {certified}), block min {:.2e}",
            two.status, block.value
        ),
    ))
}

fn criterion_6() -> Result<Outcome> {
    let ex = uv_example_map();
    let t = 1e-9;
    let (ru, rv) = (range_projection(&ex.u, t), range_projection(&ex.v, t));
    let ranks = numerical_rank(&ex.u, t) == 2 && numerical_rank(&ex.v, t) == 2;
    let commute = (&ru * &rv - &rv * &ru).frobenius_norm() < 1e-12;
    let supports = support_projection(&ex.u, t).rel_distance(&ru) < 1e-12 && support_projection(&ex.v, t).rel_distance(&ru) < 1e-12;
    let distinct = ru.rel_distance(&rv) > 0.1;
    let block = block_positivity_min(ex.map.choi(), &SeeSawConfig::with_seed(0).with_restarts(200))?;
    let out = ex.map.pre_transpose().apply_on_second_factor(&uv_witness_input())?;
    let min = eig_hermitian(&HermitianOperator::from_matrix(out)?).min_value();
    Ok(Outcome::new(
        ranks && commute && supports && distinct && block.value >= -1e-9 && min < -1e-7,
        format!(
            "ranks {ranks}, commuting ranges {commute}, supports {supports}, distinct ranges {distinct}, block min {:.2e}, witness min eig {min:.6}",
            block.value
        ),
    ))
}

fn criterion_7() -> Result<Outcome> {
    let tol = Tolerances::default();
    let cfg = SeeSawConfig::with_seed(0);
    let fixtures = battery_fixtures();
    let find = |name: &str| fixtures.iter().find(|(n, _)| n == name).map(|(_, m)| m.clone()).expect("fixture");
    use CaseBranch::*;
    let expected = [
        ("id", B),
        ("t", D),
        ("trace", A),
        ("Ad_V invertible", B),
        ("Ad_v rank-1", A),
        ("id + Ad_diag(1,-1)", C),
        ("t∘(id + Ad_diag(1,-1))∘t", E),
        ("id + 0.5 t", F),
        ("reduction", D),
    ];
    let mut mismatches = Vec::new();
    let mut mirror_ok = true;
    for (name, want) in expected {
        let phi = find(name);
        let got = classify_n2(&phi, &tol, &cfg)?;
        let mirror = classify_n2(&phi.pre_transpose(), &tol, &cfg)?;
        mirror_ok &= mirror.case_branch == got.case_branch.mirror();
        if got.case_branch != want || got.label != want.label() {
            mismatches.push((name, want, got.label, got.case_branch));
        }
    }
    let battery = classification_battery(0, 100, &tol, &cfg);
    let battery_mirror = battery.rows.iter().all(|r| r.mirror_consistent());
    let pass = mismatches.is_empty() && battery.errors == 0 && mirror_ok && battery_mirror;
    let known_defect = !pass
        && battery.errors == 0
        && mirror_ok
        && battery_mirror
        && mismatches.len() == 2
        && mismatches
            .iter()
            .all(|(name, _, label, case)| name.contains("Ad_diag(1,-1)") && *label == N2Label::Sp1 && *case == A);
    let listed: Vec<String> = mismatches
        .iter()
        .map(|(n, w, l, c)| format!("{n}: expected {}({}) got {l}({})", w.label(), w.as_char(), c.as_char()))
        .collect();
    let mut detail = format!(
        "{} random mixtures, {} errors, mirror symmetry {}",
        battery.random_count,
        battery.errors,
        mirror_ok && battery_mirror
    );
    if !listed.is_empty() {
        detail.push_str(&format!("; mismatches: {}", listed.join("; ")));
    }
    if known_defect {
        detail.push_str("; fixture defect: id + Ad_diag(1,-1) = 2·diag(X) has separable Choi 2(|00><00| + |11><11|)");
    }
    Ok(Outcome { pass, detail, known_defect })
}

fn criterion_8() -> Result<Outcome> {
    let upb = tiles_upb();
    let gram = upb.gram().rel_distance(&ComplexMatrix::identity(5));
    let rho = upb_complement_state(&upb);
    let s = singular_values(rho.matrix());
    let rank = numerical_rank(rho.matrix(), 1e-9);
    let gap = (s[3] / s[4].max(f64::MIN_POSITIVE)).log10();
    let ppt = is_ppt(&rho, 1e-10)?;
    let cfg = SeeSawConfig::with_seed(0).with_restarts(500);
    let p = BipartiteOperator::from_matrix(3, 3, range_projection(rho.matrix(), 1e-9), 1e-8)?;
    let search = product_vector_in_subspace(&p, &cfg)?;
    let bound = schmidt_number_lower_bound(&rho, &cfg)?;
    Ok(Outcome::new(
        gram < 1e-12
            && rank == 4
            && gap >= 6.0
            && ppt.holds()
            && ppt.margin >= -1e-10
            && search.vector.is_none()
            && search.best_overlap < 1.0 - 1e-3
            && bound.bound >= 2,
        format!(
            "Gram defect {gram:.1e}, rank {rank}, gap {gap:.1} decades, PPT margin {:.1e}, best product overlap {:.6}, SN >= {}",
            ppt.margin, search.best_overlap, bound.bound
        ),
    ))
}

/// Hermiticity-preserving qubit map with `Φ = Φ* = t∘Φ∘t`.
fn symmetric_qubit_map(seed: u64) -> Result<LinearMap> {
    let g = conekit::catalog::gaussian_matrix(4, 4, &mut conekit::catalog::seeded_rng(seed, 52));
    let h = (&g + &g.adjoint()).scale(0.5);
    let phi = LinearMap::from_choi_matrix(2, 2, h, 1e-10)?;
    let sym = phi
        .add(&phi.dual())?
        .add(&phi.transpose_conjugate())?
        .add(&phi.dual().transpose_conjugate())?;
    Ok(sym.scale(0.25))
}

fn spin_and_lemma(cfg: &SeeSawConfig) -> Result<(bool, usize, String)> {
    let mut spin_ok = true;
    for n in 1..=3 {
        spin_ok &= spin_claims(n)?.iter().all(|c| c.passed());
    }
    let mut agree = 0;
    let mut fails = 0;
    for i in 0..20u64 {
        let base = symmetric_qubit_map(i)?;
        let mu = block_positivity_min(base.choi(), cfg)?.value;
        let shift = if i % 2 == 0 { 0.05 } else { -0.05 };
        let phi = base.add(&trace_map(2).scale(shift - mu))?;
        let sigma = conekit::catalog::random_psd(3, 100 + i);
        let sigma = HermitianOperator::from_matrix(sigma.matrix().scale(1.0 / sigma.trace()))?;
        let big = phi.tensor(&state_functional(&sigma))?;
        let v_small = block_positivity_min(phi.choi(), cfg)?.value < cfg.negativity_threshold;
        let v_big = block_positivity_min(big.choi(), cfg)?.value < cfg.negativity_threshold;
        if v_small == v_big {
            agree += 1;
        }
        if v_small {
            fails += 1;
        }
    }
    Ok((spin_ok, agree, format!("{fails} of 20 non-positive")))
}

fn criterion_9() -> Result<Outcome> {
    let cfg = SeeSawConfig::with_seed(0);
    let (spin_ok, agree, mix) = spin_and_lemma(&cfg)?;
    Ok(Outcome::new(
        spin_ok && agree == 20,
        format!("spin invariants n = 1..3: {spin_ok}; tensor-with-state verdicts agree {agree}/20 ({mix})"),
    ))
}

fn criterion_10() -> Result<Outcome> {
    let (dom, cp) = t_dominates_r_demo(3)?;
    let (t, r) = (transpose_map(3), reduction_map(3));
    let fwd = detection_dominance(&t, &r, StateSampler::Biased, 200, 0, Some(&dom.certificate))?;
    let rev = detection_dominance(&r, &t, StateSampler::Biased, 200, 0, None)?;
    let finer = finer_not_dominant_demo(3, 20, &SeeSawConfig::with_seed(0))?;
    let ok = dom.reconstruction_error < 1e-10
        && cp.status == VerdictStatus::Holds
        && fwd.violations == 0
        && rev.violations >= 1
        && finer.phi_positive.holds()
        && finer.phi_cp.fails()
        && finer.finer.status == VerdictStatus::Holds
        && finer.samples == 20
        && finer.identity_max_error < 1e-11;
    Ok(Outcome::new(
        ok,
        format!(
            "certificate error {:.1e}, R∘t CP {}, violations t over R {}, R over t {}, finer demo: positive {} CP {} finer {} identity error {:.1e}",
            dom.reconstruction_error, cp.status, fwd.violations, rev.violations,
            finer.phi_positive.status, finer.phi_cp.status, finer.finer.status, finer.identity_max_error
        ),
    ))
}

const COMMANDS: &[&str] = &[
    "check cp choi3",
    "check kpos:2 reduction --n 3",
    "check ppt tiles-state",
    "check pos uv --seed 5",
    "classify2 id",
    "classify2 --map transpose",
    "decompose spk:2 --seeded-map spk:3:2:3:42",
    "decompose sp2-reduction --seeded-map spk:4:2:3:7",
    "demo uv-witness",
    "demo tiles",
    "demo spin:2",
    "demo t-vs-R",
    "demo finer-not-dominant",
    "demo four-cones",
    "order finer --phi transpose --psi reduction",
    "order demo t-vs-R",
    "order demo finer-not-dominant --n 3",
];

fn criterion_11() -> Result<Outcome> {
    let mut differing = Vec::new();
    for cmd in COMMANDS {
        let args: Vec<&str> = std::iter::once("conekit").chain(cmd.split(' ')).collect();
        let a = execute(args.clone());
        let b = execute(args);
        if a.stdout != b.stdout || a.exit_code != b.exit_code {
            differing.push(format!("{cmd} (in-process)"));
        }
    }
    // The binary under different thread counts must agree byte for byte.
    let bin = env!("CARGO_BIN_EXE_conekit");
    for cmd in ["check kpos:2 reduction --n 3", "demo tiles", "demo t-vs-R"] {
        let run = |threads: &str| {
            Command::new(bin)
                .args(cmd.split(' '))
                .arg("--json")
                .env("RAYON_NUM_THREADS", threads)
                .output()
                .expect("binary runs")
                .stdout
        };
        if run("1") != run("4") {
            differing.push(format!("{cmd} (threads)"));
        }
    }
    Ok(Outcome::new(
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} commands byte-identical on rerun, 3 identical across thread counts", COMMANDS.len())
        } else {
            format!("differing: {}", differing.join(", "))
        },
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("R∘t Choi closed form", criterion_1),
        ("SP2 certificates via R∘t", criterion_2),
        ("rank-k factorization", criterion_3),
        ("reduction map not 2-positive", criterion_4),
        ("Choi map", criterion_5),
        ("UV example", criterion_6),
        ("qubit typicality battery", criterion_7),
        ("Tiles UPB state", criterion_8),
        ("spin factors", criterion_9),
        ("partial order", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut unexpected = 0;
    let mut red = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name} [{secs:.1}s]: {}", i + 1, outcome.detail);
        if !outcome.pass {
            red += 1;
            if !outcome.known_defect {
                unexpected += 1;
            }
        }
    }
    println!("{} of {} criteria pass; {} failures unexplained", criteria.len() - red, criteria.len(), unexpected);
    if unexpected > 0 {
        std::process::exit(1);
    }
}
