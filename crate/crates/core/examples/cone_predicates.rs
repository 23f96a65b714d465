//! Membership tests against the standard cones. Exact tests come back as
//! HOLDS or FAILS. See-saw searches return FAILS with a witness vector, or
//! LIKELY_HOLDS when no restart found a negative value.

use conekit::catalog::{choi_map, generalized_reduction_map, maximally_entangled_state, reduction_map, transpose_map};
use conekit::cones::{is_completely_copositive, is_completely_positive, is_ppt, k_positivity_profile, SeeSawConfig};
use conekit::Result;

fn main() -> Result<()> {
    let tol = 1e-9;
    let cfg = SeeSawConfig::with_seed(7).with_restarts(20);

    for (name, phi) in [("transpose", transpose_map(3)), ("reduction", reduction_map(3)), ("choi", choi_map())] {
        let cp = is_completely_positive(&phi, tol);
        let ccp = is_completely_copositive(&phi, tol);
        println!("{name:>10}: CP {:<12} coCP {:<12}", cp.status.to_string(), ccp.status.to_string());
    }

    // Witnesses re-check against the Choi matrix they came from.
    let cp = is_completely_positive(&reduction_map(3), tol);
    println!("reduction CP margin {:.4}, recheck {:?}", cp.margin, cp.recheck(reduction_map(3).choi_matrix()));

    // R_{n,k}(X) = k Tr(X) I - X is k-positive and not (k+1)-positive.
    for k in 1..=3 {
        let phi = generalized_reduction_map(4, k);
        let profile = k_positivity_profile(&phi, 4, &cfg)?;
        let row: Vec<String> = profile.iter().map(|v| v.status.to_string()).collect();
        println!("R(4,{k}) k = 1..4: {}", row.join(" "));
    }

    let omega = maximally_entangled_state(2);
    println!("maximally entangled state PPT: {}", is_ppt(&omega, tol)?.status);
    Ok(())
}
