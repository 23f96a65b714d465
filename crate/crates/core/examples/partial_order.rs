//! Dominance: Ψ is dominated by Φ when Ψ lies in the cone generated by Φ.
//! A dominated map detects no more entanglement than its dominator.

use conekit::catalog::{reduction_map, transpose_map};
use conekit::cones::SeeSawConfig;
use conekit::order::{detection_dominance, finer_not_dominant_demo, is_finer, t_dominates_r_demo, StateSampler};
use conekit::Result;

fn main() -> Result<()> {
    let (dom, cp) = t_dominates_r_demo(3)?;
    println!("R = Σ Ad_A ∘ t ∘ Ad_B with {} pairs, error {:.1e}", dom.certificate.pairs.len(), dom.reconstruction_error);
    println!("R∘t completely positive: {}", cp.status);

    let (t, r) = (transpose_map(3), reduction_map(3));
    let fwd = detection_dominance(&t, &r, StateSampler::Biased, 200, 5, Some(&dom.certificate))?;
    let rev = detection_dominance(&r, &t, StateSampler::Biased, 200, 5, None)?;
    println!("t detects {} and R detects {} of {} states", fwd.phi_detections, fwd.psi_detections, fwd.samples);
    println!("states R detects but t misses: {}", fwd.violations);
    println!("states t detects but R misses: {}", rev.violations);

    println!("t finer than R (R - t completely positive): {}", is_finer(&t, &r, 1e-9)?.status);
    println!("t finer than t + R∘t:                       {}", is_finer(&t, &t.add(&r.pre_transpose())?, 1e-9)?.status);

    let rep = finer_not_dominant_demo(3, 10, &SeeSawConfig::with_seed(0))?;
    println!("finer without dominance, n = 3: all checks pass = {}", rep.checks_pass());
    Ok(())
}
