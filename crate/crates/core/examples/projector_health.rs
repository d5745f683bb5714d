//! Dense checks of the two-copy projectors: idempotence, Hermiticity,
//! fixation of the highest-weight pair and preservation of the pair space.
//!
//! Run with `cargo run --release --example projector_health`.

use genconc::projector::{default_health_specs, run_healthchecks, DEFAULT_DENSE_CAP};

fn main() -> genconc::Result<()> {
    let reports = run_healthchecks(&default_health_specs(), DEFAULT_DENSE_CAP)?;
    println!(
        "{:<4} {:<16} {:>2} {:>2} {:>7} {:>11} {:>11} {:>11} {:>11}  ok",
        "tag", "kind", "L", "N", "alpha", "idempotent", "hermitian", "highest wt", "subspace"
    );
    for r in &reports {
        println!(
            "{:<4} {:<16} {:>2} {:>2} {:>7.4} {:>11.2e} {:>11.2e} {:>11.2e} {:>11.2e}  {}",
            format!("{:?}", r.tag),
            r.kind.to_string(),
            r.particles,
            r.modes,
            r.alpha,
            r.idempotence_defect,
            r.hermiticity_defect,
            r.highest_weight_defect.unwrap_or(0.0),
            r.subspace_defect,
            r.passed
        );
    }
    Ok(())
}
