//! Ad_U + Ad_V for two rank-two operators on H_3 with commuting range
//! projections but different ranges. It is positive, and the entangled
//! input w = e1⊗f1 + e2⊗f2 shows it is not in P_2∘t.

use conekit::catalog::uv_example_map;
use conekit::cones::{block_positivity_min, not_in_p2_circ_t, p2t_witness_output, SeeSawConfig};
use conekit::linops::{eig_hermitian, numerical_rank, range_projection};
use conekit::{HermitianOperator, Result};

fn main() -> Result<()> {
    let ex = uv_example_map();
    println!("rank U = {}, rank V = {}", numerical_rank(&ex.u, 1e-9), numerical_rank(&ex.v, 1e-9));
    let (ru, rv) = (range_projection(&ex.u, 1e-9), range_projection(&ex.v, 1e-9));
    println!("[R(U), R(V)] = {:.1e}", (&ru * &rv - &rv * &ru).frobenius_norm());

    let cfg = SeeSawConfig::with_seed(0).with_restarts(100);
    let block = block_positivity_min(ex.map.choi(), &cfg)?;
    println!("min <x⊗y, C x⊗y> over product vectors: {:.2e}", block.value);

    let out = HermitianOperator::from_matrix(p2t_witness_output(&ex.map)?)?;
    let spectrum = eig_hermitian(&out);
    println!("spectrum of (id2 ⊗ Φ∘t)(ww*): {:?}", spectrum.values.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>());
    println!("expected negative eigenvalue (1 - √5)/2 = {:.4}", (1.0 - 5f64.sqrt()) / 2.0);

    let v = not_in_p2_circ_t(&ex.map, &cfg)?;
    println!("Φ in P2∘t: {} (margin {:.4})", v.status, v.margin);
    Ok(())
}
