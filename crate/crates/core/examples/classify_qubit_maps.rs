//! Which of the typical cones P1, CP, CP∘t and SP1 does a positive qubit
//! map generate? Every classification is paired with that of Φ∘t, which
//! must land in the mirrored case.

use conekit::classify2::{classification_battery, classify_n2};
use conekit::cones::SeeSawConfig;
use conekit::catalog::{identity_map, transpose_map};
use conekit::{Result, Tolerances};

fn main() -> Result<()> {
    let tol = Tolerances::default();
    let cfg = SeeSawConfig::with_seed(0);

    let mix = identity_map(2).scale(0.5).add(&transpose_map(2).scale(0.5))?;
    let c = classify_n2(&mix, &tol, &cfg)?;
    println!("(id + t)/2 -> {} ({})", c.label, c.case_branch.as_char());
    for step in &c.evidence {
        println!("    {}", step.check);
    }

    let report = classification_battery(0, 40, &tol, &cfg);
    println!();
    for row in report.rows.iter().take(14) {
        let label = row.label.map(|l| l.to_string()).unwrap_or_else(|| "error".into());
        let case = row.case_branch.map(|c| c.as_char()).unwrap_or('?');
        println!("{:<28} {:<10} ({case}) mirror ok: {}", row.name, label, row.mirror_consistent());
    }
    println!("histogram {:?}, errors {}", report.histogram, report.errors);
    Ok(())
}
