//! Convex-roof upper estimates from seeded random restarts.
//!
//! Run with `cargo run --release --example convex_roof`.

use genconc::bounds::{witness_bound, wootters_oracle};
use genconc::roof::{convex_roof_upper, RoofOptions};
use genconc::state::{named, MixedState};
use genconc::tensor::{ParticleKind, SystemShape};

fn main() -> genconc::Result<()> {
    println!("{:>5} {:>10} {:>10} {:>10}", "p", "lower", "oracle", "roof");
    for p in [0.2, 0.4, 0.6, 0.8, 1.0] {
        let rho = named::werner(p)?;
        let est = convex_roof_upper(&rho, &RoofOptions::default())?;
        println!(
            "{p:>5.1} {:>10.6} {:>10.6} {:>10.6}",
            witness_bound(&rho)?.lower_bound,
            wootters_oracle(&rho)?,
            est.value
        );
    }

    let shape = SystemShape::new(ParticleKind::Fermion, 2, 4)?;
    let rho = MixedState::random(shape, 3, 12)?;
    println!(
        "random rank-3 fermionic state, witness bound {:.6}",
        witness_bound(&rho)?.lower_bound
    );
    for restarts in [1, 4, 16, 64] {
        let est = convex_roof_upper(
            &rho,
            &RoofOptions {
                restarts,
                seed: 1,
                ..RoofOptions::default()
            },
        )?;
        println!(
            "  restarts {restarts:>3}: value {:.6}, {} members, converged {}, reconstruction error {:.1e}",
            est.value,
            est.decomposition.len(),
            est.converged,
            est.decomposition.reconstruction_error(&rho)
        );
    }
    Ok(())
}
