//! Spin factors: anticommuting symmetries s_1..s_2n on (C^2)^⊗n and the
//! trace-preserving projections E_k onto their span with the identity.

use conekit::catalog::{spin_projection_e, SpinSystem};
use conekit::cli::spin_claims;
use conekit::cones::{is_k_positive, SeeSawConfig};
use conekit::Result;

fn main() -> Result<()> {
    for n in 1..=3 {
        let claims = spin_claims(n)?;
        let worst = claims.iter().filter_map(|c| c.margin).fold(0.0f64, f64::max);
        println!("n = {n}: {} invariants, all pass: {}, worst residual {worst:.1e}",
            claims.len(), claims.iter().all(|c| c.passed()));
    }

    // On one spin, E_2(X) = (X + X^t)/2: positive but not 2-positive.
    let cfg = SeeSawConfig::with_seed(1);
    let sys = SpinSystem::new(1)?;
    let e2 = spin_projection_e(&sys, 2)?;
    for k in 1..=2 {
        let v = is_k_positive(&e2, k, &cfg)?;
        println!("E_2 on one spin, {k}-positive: {} (margin {:.3})", v.status, v.margin);
    }
    Ok(())
}
