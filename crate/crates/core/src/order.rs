//! The order `Φ ⪰ Ψ` (Ψ lies in the cone generated by Φ) and the weaker
//! "finer than" relation, with the detection harness comparing them.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{
    gaussian_matrix, identity_map, random_psd_with, reduction_map, seeded_rng,
    transpose_map,
};
use crate::cones::{is_completely_positive, is_positive, MembershipVerdict, SeeSawConfig};
use crate::error::{ConeError, Result};
use crate::generate::{certificate_implies_detection, detection, CertificatePair, GenerationCertificate};
use crate::linops::{is_psd, BipartiteOperator, ComplexMatrix, HermitianOperator, Tolerances, C64};
use crate::posmaps::{adjoint_map, LinearMap};

/// `Φ` finer than `Ψ`: `Ψ − Φ` is completely positive.
pub fn is_finer(phi: &LinearMap, psi: &LinearMap, tol: f64) -> Result<MembershipVerdict> {
    let omega = psi.sub(phi)?;
    let mut v = is_completely_positive(&omega, tol);
    v.diagnostics.method = "choi spectrum of psi - phi".into();
    Ok(v)
}

/// Whether `(id ⊗ Φ)(X)` has a negative eigenvalue, with that eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Detection {
    pub detected: bool,
    pub margin: f64,
}

pub fn detects(phi: &LinearMap, x: &BipartiteOperator, tol: f64) -> Result<Detection> {
    let check = is_psd(x.op(), tol);
    if !check.psd {
        return Err(ConeError::NotPsdInput {
            min_eigenvalue: check.min_eigenvalue,
        });
    }
    let (detected, margin) = detection(phi, x, tol)?;
    Ok(Detection { detected, margin })
}

/// Certified `dominating ⪰ dominated`.
#[derive(Clone, Debug, Serialize)]
pub struct DominanceCertificate {
    pub dominating: LinearMap,
    pub dominated: LinearMap,
    pub certificate: GenerationCertificate,
    #[serde(rename = "reconstructionError")]
    pub reconstruction_error: f64,
}

impl DominanceCertificate {
    pub fn new(dominating: LinearMap, dominated: LinearMap, certificate: GenerationCertificate) -> Result<Self> {
        if certificate.seed_map != dominating {
            return Err(ConeError::InvalidInput("certificate seed is not the dominating map".into()));
        }
        let reconstruction_error = certificate.verify(&dominated)?;
        Ok(DominanceCertificate {
            dominating,
            dominated,
            certificate,
            reconstruction_error,
        })
    }
}

/// `t ⪰ R` on `L(H_n)`: `R = Σ_i Ad_{A_i} ∘ t` with `A_i` the Kraus
/// operators of the completely positive map `R∘t`.
pub fn t_dominates_r_demo(n: usize) -> Result<(DominanceCertificate, MembershipVerdict)> {
    let r = reduction_map(n);
    let rt = r.pre_transpose();
    let cp = is_completely_positive(&rt, Tolerances::default().psd);
    let kraus = rt.kraus(1e-12)?;
    let pairs = kraus
        .operators
        .iter()
        .map(|a| CertificatePair {
            a: a.clone(),
            b: ComplexMatrix::identity(n),
        })
        .collect();
    let cert = GenerationCertificate::new(transpose_map(n), pairs)?;
    Ok((DominanceCertificate::new(transpose_map(n), r, cert)?, cp))
}

/// Report of the finer-but-not-dominant construction.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FinerNotDominantReport {
    pub n: usize,
    /// `Φ = Ad_{P₁} ∘ t ∘ Ad_{P₁}`.
    pub phi: LinearMap,
    pub phi_positive: MembershipVerdict,
    pub phi_cp: MembershipVerdict,
    pub finer: MembershipVerdict,
    pub samples: usize,
    pub identity_max_error: f64,
    /// `‖C_{Φ+Ω} − C_Φ‖_F`, positive when the sum strictly adds a CP part.
    pub omega_choi_norm: f64,
    pub non_dominance: &'static str,
}

impl FinerNotDominantReport {
    pub fn checks_pass(&self) -> bool {
        self.phi_positive.holds()
            && self.phi_cp.fails()
            && self.finer.holds()
            && self.identity_max_error < 1e-11
            && self.omega_choi_norm > 0.0
    }
}

/// `P₁ = diag(1, 1, 0, …)`, `Φ = Ad_{P₁} ∘ t ∘ Ad_{P₁}`, `Ω = Ad_{I − P₁}`.
pub fn finer_not_dominant_demo(n: usize, samples: usize, cfg: &SeeSawConfig) -> Result<FinerNotDominantReport> {
    if n < 3 {
        return Err(ConeError::InvalidInput("the construction needs n >= 3".into()));
    }
    let mut diag = vec![0.0; n];
    diag[0] = 1.0;
    diag[1] = 1.0;
    let p1 = ComplexMatrix::diag_real(&diag);
    let p2 = ComplexMatrix::identity(n) - &p1;
    let phi = adjoint_map(&p1).compose(&transpose_map(n))?.compose(&adjoint_map(&p1))?;
    let omega = adjoint_map(&p2);
    let sum = phi.add(&omega)?;
    let tol = Tolerances::default();

    let phi_positive = is_positive(&phi, cfg)?;
    let omega_choi_norm = (sum.choi_matrix() - phi.choi_matrix()).frobenius_norm();
    let phi_cp = is_completely_positive(&phi, tol.psd);
    let finer = is_finer(&phi, &sum, tol.psd)?;

    let mut worst = 0.0f64;
    for s in 0..samples {
        let mut rng = seeded_rng(cfg.seed, 10_000 + s as u64);
        let a = gaussian_matrix(n, n, &mut rng);
        let lhs = adjoint_map(&a).compose(&phi)?;
        let rhs = adjoint_map(&(&a * &p1)).compose(&phi)?;
        worst = worst.max(lhs.distance(&rhs));
    }
    Ok(FinerNotDominantReport {
        n,
        phi,
        phi_positive,
        phi_cp,
        finer,
        samples,
        identity_max_error: worst,
        omega_choi_norm,
        non_dominance: "phi does not dominate phi + omega: theoretical claim, not verified numerically",
    })
}

/// Distribution of states for detection experiments.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub enum StateSampler {
    /// Normalized Wishart matrices of random rank.
    Wishart,
    /// Wishart states mixed with the maximally entangled projector at a
    /// uniformly random weight.
    #[default]
    Biased,
}

impl StateSampler {
    /// Sample number `index` under `seed` on `C^{da} ⊗ C^{db}`.
    pub fn sample(&self, da: usize, db: usize, seed: u64, index: u64) -> BipartiteOperator {
        let mut rng = seeded_rng(seed, index);
        let d = da * db;
        let rank = rng.random_range(1..=d);
        let w = random_psd_with(d, rank, &mut rng);
        let mut rho = w.matrix().scale(1.0 / w.trace());
        if *self == StateSampler::Biased {
            let p: f64 = rng.random();
            let k = da.min(db);
            let psi = crate::linops::CVector::from_fn(d, |idx, _| {
                let (i, j) = (idx / db, idx % db);
                if i == j && i < k {
                    C64::new(1.0 / (k as f64).sqrt(), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            rho = rho.scale(1.0 - p) + ComplexMatrix::outer(&psi, &psi).scale(p);
        }
        BipartiteOperator::new(da, db, HermitianOperator::new(rho, 1e-8).expect("convex mixture of states"))
            .expect("dimensions agree")
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DominanceReport {
    pub samples: usize,
    pub seed: u64,
    pub sampler: StateSampler,
    pub phi_detections: usize,
    pub psi_detections: usize,
    /// Samples detected by `Ψ` and missed by `Φ`.
    pub violations: usize,
    pub violation_indices: Vec<usize>,
    /// Disagreements between the batch and `certificate_implies_detection`,
    /// when a certificate was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_disagreements: Option<usize>,
}

/// Tabulates `detect(Ψ) ⇒ detect(Φ)` over seeded states on `C^n ⊗ C^n`.
pub fn detection_dominance(
    phi: &LinearMap,
    psi: &LinearMap,
    sampler: StateSampler,
    count: usize,
    seed: u64,
    certificate: Option<&GenerationCertificate>,
) -> Result<DominanceReport> {
    phi.check_same_shape(psi)?;
    let n = phi.dim_in();
    let tol = Tolerances::default().psd;
    let rows: Vec<Result<(bool, bool, Option<bool>)>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let x = sampler.sample(n, n, seed, i as u64);
            let dp = detects(phi, &x, tol)?.detected;
            let ds = detects(psi, &x, tol)?.detected;
            let cross = match certificate {
                Some(c) => Some(certificate_implies_detection(c, &x)? == (!ds || dp)),
                None => None,
            };
            Ok((dp, ds, cross))
        })
        .collect();
    let mut report = DominanceReport {
        samples: count,
        seed,
        sampler,
        phi_detections: 0,
        psi_detections: 0,
        violations: 0,
        violation_indices: Vec::new(),
        certificate_disagreements: certificate.map(|_| 0),
    };
    for (i, row) in rows.into_iter().enumerate() {
        let (dp, ds, cross) = row?;
        report.phi_detections += dp as usize;
        report.psi_detections += ds as usize;
        if ds && !dp {
            report.violations += 1;
            if report.violation_indices.len() < 16 {
                report.violation_indices.push(i);
            }
        }
        if let (Some(ok), Some(d)) = (cross, report.certificate_disagreements.as_mut()) {
            *d += (!ok) as usize;
        }
    }
    Ok(report)
}

/// `id ⪰ id` with the single pair `(I, I)`.
pub fn trivial_dominance(n: usize) -> Result<DominanceCertificate> {
    let id = identity_map(n);
    let cert = GenerationCertificate::new(
        id.clone(),
        vec![CertificatePair {
            a: ComplexMatrix::identity(n),
            b: ComplexMatrix::identity(n),
        }],
    )?;
    DominanceCertificate::new(id.clone(), id, cert)
}
