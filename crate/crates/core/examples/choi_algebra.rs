//! Choi matrices as the working representation of linear maps: application,
//! composition, duals, transposes and Kraus decompositions all read off the
//! same `n·m × n·m` matrix.

use conekit::catalog::{choi_map, e, reduction_map, transpose_map};
use conekit::linops::{partial_transpose, Subsystem};
use conekit::posmaps::adjoint_map;
use conekit::{ComplexMatrix, LinearMap, Result};

fn main() -> Result<()> {
    let n = 3;
    let r = reduction_map(n);

    // The Choi matrix stores Φ(E_ij) block by block.
    let direct = LinearMap::from_action(n, n, |x| ComplexMatrix::identity(n).scale_complex(x.trace()) - x.clone())?;
    println!("R from its action vs catalog:   {:.2e}", r.distance(&direct));
    println!("R(E_01) entry (0,1):            {}", r.apply(&e(n, 0, 1))?.inner()[(0, 1)]);

    // Pre-composing with t transposes the first factor of the Choi matrix.
    let t = transpose_map(n);
    let pt = partial_transpose(r.choi(), Subsystem::A);
    println!("C(R∘t) = (C_R)^Γ:               {:.2e}", r.pre_transpose().choi_matrix().rel_distance(pt.matrix()));
    println!("R∘t via compose:                {:.2e}", r.compose(&t)?.distance(&r.pre_transpose()));

    // Conjugations act by congruence on the Choi matrix.
    let a = ComplexMatrix::from_real(n, n, &[1.0, 2.0, 0.0, 0.0, 1.0, -1.0, 3.0, 0.0, 1.0]);
    let b = ComplexMatrix::from_real(n, n, &[0.5, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, -2.0, 1.0]);
    let sandwich = adjoint_map(&a).compose(&r)?.compose(&adjoint_map(&b))?;
    let x = ComplexMatrix::from_real(n, n, &[1.0, 0.0, 2.0, 0.0, 3.0, 1.0, 2.0, 1.0, 0.0]);
    let by_hand = &a * &r.apply(&(&b * &x * b.adjoint()))? * a.adjoint();
    println!("Ad_A∘R∘Ad_B on a test matrix:   {:.2e}", sandwich.apply(&x)?.rel_distance(&by_hand));

    // Tr(Φ(X) Y) = Tr(X Φ*(Y)).
    let phi = choi_map();
    let y = ComplexMatrix::from_real(n, n, &[0.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 1.0]);
    let lhs = (&phi.apply(&x)? * &y).trace();
    let rhs = (&x * &phi.dual().apply(&y)?).trace();
    println!("Choi map duality defect:        {:.2e}", (lhs - rhs).norm());

    // A Kraus family from the spectrum of a PSD Choi matrix.
    let sand2 = adjoint_map(&a).add(&adjoint_map(&b))?;
    let kraus = sand2.kraus(1e-10)?;
    println!("Kraus operators of Ad_A + Ad_B: {} (ranks {:?})", kraus.len(), kraus.ranks);
    println!("reassembled:                    {:.2e}", kraus.to_map().expect("non-empty").distance(&sand2));
    Ok(())
}
