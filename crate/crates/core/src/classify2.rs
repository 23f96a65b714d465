//! Typicality of single-map cones on `L(H_2)`.
//!
//! On qubits the typical convex mapping cones are `P₁`, `CP`, `CP∘t` and
//! `SP₁`. Which cone a single positive map generates is decided by whether
//! its Choi matrix is PSD, whether it is PPT, and the rank of `C_Φ` or
//! `C_{Φ∘t}`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{gaussian_matrix, identity_map, reduction_map, seeded_rng, trace_map, transpose_map};
use crate::cones::{is_completely_copositive, is_completely_positive, is_positive, MembershipVerdict, SeeSawConfig};
use crate::error::{ConeError, Result};
use crate::linops::{partial_transpose, singular_values, ComplexMatrix, Subsystem, Tolerances};
use crate::posmaps::{adjoint_map, LinearMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum N2Label {
    #[serde(rename = "SP1")]
    Sp1,
    #[serde(rename = "CP")]
    Cp,
    #[serde(rename = "CP_T")]
    CpT,
    #[serde(rename = "UNTYPICAL")]
    Untypical,
}

impl N2Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            N2Label::Sp1 => "SP1",
            N2Label::Cp => "CP",
            N2Label::CpT => "CP_T",
            N2Label::Untypical => "UNTYPICAL",
        }
    }

    /// The label of `Φ∘t` given the label of `Φ`.
    pub fn mirror(&self) -> N2Label {
        match self {
            N2Label::Cp => N2Label::CpT,
            N2Label::CpT => N2Label::Cp,
            other => *other,
        }
    }
}

impl std::fmt::Display for N2Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The six cases (a)–(f) of the qubit classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseBranch {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl CaseBranch {
    pub fn as_char(&self) -> char {
        match self {
            CaseBranch::A => 'a',
            CaseBranch::B => 'b',
            CaseBranch::C => 'c',
            CaseBranch::D => 'd',
            CaseBranch::E => 'e',
            CaseBranch::F => 'f',
        }
    }

    pub fn label(&self) -> N2Label {
        match self {
            CaseBranch::A => N2Label::Sp1,
            CaseBranch::B => N2Label::Cp,
            CaseBranch::D => N2Label::CpT,
            CaseBranch::C | CaseBranch::E | CaseBranch::F => N2Label::Untypical,
        }
    }

    /// Case exchange under `Φ ↦ Φ∘t`: b↔d, c↔e.
    pub fn mirror(&self) -> CaseBranch {
        match self {
            CaseBranch::B => CaseBranch::D,
            CaseBranch::D => CaseBranch::B,
            CaseBranch::C => CaseBranch::E,
            CaseBranch::E => CaseBranch::C,
            other => *other,
        }
    }
}

/// One recorded step of the decision.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Evidence {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<MembershipVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_values: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct N2Classification {
    pub label: N2Label,
    pub case_branch: CaseBranch,
    pub evidence: Vec<Evidence>,
}

/// The four typical cones on `L(H_2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TypicalCone {
    #[serde(rename = "P1")]
    P1,
    #[serde(rename = "CP")]
    Cp,
    #[serde(rename = "CP_T")]
    CpT,
    #[serde(rename = "SP1")]
    Sp1,
}

/// A typical cone with a description of its membership test.
#[derive(Clone, Debug, Serialize)]
pub struct ConeDescriptor {
    pub cone: TypicalCone,
    pub name: &'static str,
    pub test: &'static str,
    pub exact: bool,
}

pub fn typical_cones_n2() -> Vec<ConeDescriptor> {
    vec![
        ConeDescriptor {
            cone: TypicalCone::P1,
            name: "P1",
            test: "block-positivity search on the Choi matrix",
            exact: false,
        },
        ConeDescriptor {
            cone: TypicalCone::Cp,
            name: "CP",
            test: "Choi matrix PSD",
            exact: true,
        },
        ConeDescriptor {
            cone: TypicalCone::CpT,
            name: "CP∘t",
            test: "partially transposed Choi matrix PSD",
            exact: true,
        },
        ConeDescriptor {
            cone: TypicalCone::Sp1,
            name: "SP1",
            test: "Choi matrix PSD and PPT (exact on 2⊗2)",
            exact: true,
        },
    ]
}

impl TypicalCone {
    pub fn membership(&self, phi: &LinearMap, tol: &Tolerances, cfg: &SeeSawConfig) -> Result<MembershipVerdict> {
        match self {
            TypicalCone::P1 => is_positive(phi, cfg),
            TypicalCone::Cp => Ok(is_completely_positive(phi, tol.psd)),
            TypicalCone::CpT => Ok(is_completely_copositive(phi, tol.psd)),
            TypicalCone::Sp1 => {
                let cp = is_completely_positive(phi, tol.psd);
                if cp.fails() {
                    return Ok(cp);
                }
                let mut v = is_completely_copositive(phi, tol.psd);
                v.diagnostics.method = "choi PSD and PPT".into();
                Ok(v)
            }
        }
    }
}

fn rank_evidence(check: &str, m: &ComplexMatrix, tol: f64) -> Result<(usize, Evidence)> {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    let rank = if top > 0.0 { s.iter().filter(|&&x| x > tol * top).count() } else { 0 };
    if top > 0.0 {
        for &x in &s[1..] {
            let ratio = x / top;
            if ratio > tol / 10.0 && ratio < tol * 10.0 {
                return Err(ConeError::AmbiguousRank {
                    ratio,
                    candidates: Vec::new(),
                });
            }
        }
    }
    Ok((
        rank,
        Evidence {
            check: check.into(),
            verdict: None,
            rank: Some(rank),
            singular_values: Some(s),
        },
    ))
}

fn with_candidates(err: ConeError, candidates: [CaseBranch; 2]) -> ConeError {
    match err {
        ConeError::AmbiguousRank { ratio, .. } => ConeError::AmbiguousRank {
            ratio,
            candidates: candidates.iter().map(|c| format!("{} ({})", c.label(), c.as_char())).collect(),
        },
        other => other,
    }
}

fn verdict_evidence(check: &str, v: &MembershipVerdict) -> Evidence {
    Evidence {
        check: check.into(),
        verdict: Some(v.clone()),
        rank: None,
        singular_values: None,
    }
}

/// Classifies the cone generated by a positive map on `L(H_2)`.
pub fn classify_n2(phi: &LinearMap, tol: &Tolerances, cfg: &SeeSawConfig) -> Result<N2Classification> {
    if phi.dim_in() != 2 || phi.dim_out() != 2 {
        return Err(ConeError::WrongDimension(format!(
            "classification needs a map on L(H_2), got L(H_{}) → L(H_{})",
            phi.dim_in(),
            phi.dim_out()
        )));
    }
    let mut evidence = Vec::new();
    let pos = is_positive(phi, cfg)?;
    if pos.fails() {
        return Err(ConeError::NotPositive { value: pos.margin });
    }
    evidence.push(verdict_evidence("positive (precondition)", &pos));

    let cp = is_completely_positive(phi, tol.psd);
    let ccp = is_completely_copositive(phi, tol.psd);
    evidence.push(verdict_evidence("choi PSD", &cp));
    evidence.push(verdict_evidence("choi PPT (phi∘t CP)", &ccp));

    let branch = if cp.holds() && ccp.holds() {
        CaseBranch::A
    } else if cp.holds() {
        let (rank, ev) = rank_evidence("rank C_phi", phi.choi_matrix(), tol.rank)
            .map_err(|e| with_candidates(e, [CaseBranch::B, CaseBranch::C]))?;
        evidence.push(ev);
        if rank == 1 {
            CaseBranch::B
        } else {
            CaseBranch::C
        }
    } else if ccp.holds() {
        let pt = partial_transpose(phi.choi(), Subsystem::A);
        let (rank, ev) = rank_evidence("rank C_(phi∘t)", pt.matrix(), tol.rank)
            .map_err(|e| with_candidates(e, [CaseBranch::D, CaseBranch::E]))?;
        evidence.push(ev);
        if rank == 1 {
            CaseBranch::D
        } else {
            CaseBranch::E
        }
    } else {
        CaseBranch::F
    };
    Ok(N2Classification {
        label: branch.label(),
        case_branch: branch,
        evidence,
    })
}

/// Named qubit maps exercised by the battery.
pub fn battery_fixtures() -> Vec<(String, LinearMap)> {
    let v = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, -1.0, 1.0]);
    let rank_one = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 0.5, 1.0]);
    let z = ComplexMatrix::diag_real(&[1.0, -1.0]);
    let half = ComplexMatrix::diag_real(&[1.0, 0.5]);
    let id_z = identity_map(2).add(&adjoint_map(&z)).expect("same shape");
    let id_half = identity_map(2).add(&adjoint_map(&half)).expect("same shape");
    let id_half_t = identity_map(2).add(&transpose_map(2).scale(0.5)).expect("same shape");
    let mut out = vec![
        ("id".to_string(), identity_map(2)),
        ("t".to_string(), transpose_map(2)),
        ("trace".to_string(), trace_map(2)),
        ("Ad_V invertible".to_string(), adjoint_map(&v)),
        ("Ad_v rank-1".to_string(), adjoint_map(&rank_one)),
        ("id + Ad_diag(1,-1)".to_string(), id_z.clone()),
        ("t∘(id + Ad_diag(1,-1))∘t".to_string(), id_z.transpose_conjugate()),
        ("id + Ad_diag(1,1/2)".to_string(), id_half.clone()),
        ("(id + Ad_diag(1,1/2))∘t".to_string(), id_half.pre_transpose()),
        ("id + 0.5 t".to_string(), id_half_t),
        ("reduction".to_string(), reduction_map(2)),
    ];
    for p in [0.25, 0.5, 0.75] {
        let mix = identity_map(2).scale(p).add(&transpose_map(2).scale(1.0 - p)).expect("same shape");
        out.push((format!("{p} id + {} t", 1.0 - p), mix));
    }
    out
}

/// `Σ_i Ad_{G_i} + Σ_j Ad_{H_j}∘t` with one to three terms on each side.
pub fn random_cp_plus_cocp(seed: u64, index: u64) -> LinearMap {
    let mut rng = seeded_rng(seed, index);
    let cp_terms = 1 + (rand::Rng::random_range(&mut rng, 0..3usize));
    let cocp_terms = 1 + (rand::Rng::random_range(&mut rng, 0..3usize));
    let mut acc = adjoint_map(&gaussian_matrix(2, 2, &mut rng));
    for _ in 1..cp_terms {
        acc = acc.add(&adjoint_map(&gaussian_matrix(2, 2, &mut rng))).expect("same shape");
    }
    for _ in 0..cocp_terms {
        let term = adjoint_map(&gaussian_matrix(2, 2, &mut rng)).pre_transpose();
        acc = acc.add(&term).expect("same shape");
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BatteryRow {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<N2Label>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case_branch: Option<CaseBranch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mirror_label: Option<N2Label>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mirror_case: Option<CaseBranch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl BatteryRow {
    /// The classification of `Φ∘t` is the case exchange of that of `Φ`.
    pub fn mirror_consistent(&self) -> bool {
        match (self.case_branch, self.mirror_case) {
            (Some(c), Some(m)) => c.mirror() == m,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BatteryReport {
    pub seed: u64,
    pub random_count: usize,
    pub rows: Vec<BatteryRow>,
    pub histogram: BTreeMap<String, usize>,
    pub errors: usize,
}

/// Classifies the fixtures and `count` seeded CP + co-CP mixtures, together
/// with their mirror images `Φ∘t`.
pub fn classification_battery(seed: u64, count: usize, tol: &Tolerances, cfg: &SeeSawConfig) -> BatteryReport {
    let mut maps = battery_fixtures();
    maps.extend((0..count).map(|i| (format!("random cp+cocp #{i}"), random_cp_plus_cocp(seed, i as u64))));
    let rows: Vec<BatteryRow> = maps
        .par_iter()
        .map(|(name, phi)| {
            let direct = classify_n2(phi, tol, cfg);
            let mirror = classify_n2(&phi.pre_transpose(), tol, cfg);
            let error = match (&direct, &mirror) {
                (Err(e), _) | (_, Err(e)) => Some(format!("{}: {e}", e.code())),
                _ => None,
            };
            BatteryRow {
                name: name.clone(),
                label: direct.as_ref().ok().map(|c| c.label),
                case_branch: direct.as_ref().ok().map(|c| c.case_branch),
                mirror_label: mirror.as_ref().ok().map(|c| c.label),
                mirror_case: mirror.as_ref().ok().map(|c| c.case_branch),
                error,
            }
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for r in &rows {
        if let (Some(l), Some(c)) = (r.label, r.case_branch) {
            *histogram.entry(format!("{} ({})", l, c.as_char())).or_insert(0) += 1;
        }
    }
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    BatteryReport {
        seed,
        random_count: count,
        rows,
        histogram,
        errors,
    }
}
