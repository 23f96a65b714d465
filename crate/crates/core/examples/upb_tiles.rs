//! The five-tile unextendible product basis on 3 ⊗ 3. The projection onto
//! its complement, I minus the five product projections, is PPT yet
//! entangled: its range holds no product vector.

use conekit::catalog::{tiles_upb, upb_complement_state};
use conekit::cones::{is_ppt, product_vector_in_subspace, schmidt_number_lower_bound, SeeSawConfig};
use conekit::linops::{numerical_rank, range_projection};
use conekit::{BipartiteOperator, ComplexMatrix, Result};

fn main() -> Result<()> {
    let upb = tiles_upb();
    println!("{} product vectors, Gram defect {:.1e}", upb.len(), upb.gram().rel_distance(&ComplexMatrix::identity(5)));

    let rho = upb_complement_state(&upb);
    println!("rank {}, trace {:.6}", numerical_rank(rho.matrix(), 1e-9), rho.trace());
    println!("PPT: {}", is_ppt(&rho, 1e-10)?.status);

    let cfg = SeeSawConfig::with_seed(3).with_restarts(200);
    let p = BipartiteOperator::from_matrix(3, 3, range_projection(rho.matrix(), 1e-9), 1e-8)?;
    let search = product_vector_in_subspace(&p, &cfg)?;
    println!("best product overlap with range: {:.6} over {} restarts", search.best_overlap, search.restarts);

    let bound = schmidt_number_lower_bound(&rho, &cfg)?;
    println!("Schmidt number >= {} (certified by exact tests: {})", bound.bound, bound.certified);
    for line in &bound.evidence {
        println!("    {line}");
    }
    Ok(())
}
