//! Certificates that a map lies in the cone generated by a seed: a list of
//! pairs (A_i, B_i) with Φ = Σ Ad_{A_i} ∘ seed ∘ Ad_{B_i}. Every certificate
//! is replayed against the target before it is trusted.

use conekit::catalog::random_spk_map;
use conekit::generate::{
    default_seed, reduction_transpose_pairs, schmidt_pairs_from_kraus, sp2_via_reduction, spk_generation_certificate,
};
use conekit::{ConeError, Result};

fn main() -> Result<()> {
    let (map, kraus) = random_spk_map(3, 2, 4, 42)?;
    println!("target: {} Kraus operators, ranks {:?}", kraus.len(), kraus.ranks);

    // Every Kraus operator of rank <= k factors through the rank-k seed.
    let cert = spk_generation_certificate(&kraus, &default_seed(3, 2))?;
    println!("SP_2 from Ad_(rank-2 projection): {} pairs, error {:.2e}", cert.pairs.len(), cert.verify(&map)?);

    // Rank-two Kraus operators also factor through R∘t.
    let pairs = schmidt_pairs_from_kraus(&kraus)?;
    let cert = sp2_via_reduction(&pairs)?;
    println!("SP_2 from R∘t:                   {} pairs, error {:.2e}", cert.pairs.len(), cert.verify(&map)?);

    // R∘t itself is a sum over antisymmetric vectors.
    println!("R∘t on H_4 has {} rank-two Schmidt pairs", reduction_transpose_pairs(4).len());

    // A seed of too small a rank cannot produce rank-two operators.
    match spk_generation_certificate(&kraus, &default_seed(3, 1)) {
        Err(ConeError::RankTooHigh { rank, k }) => println!("seed rank {k} rejected: operator of rank {rank}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
