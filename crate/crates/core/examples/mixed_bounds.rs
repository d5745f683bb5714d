//! Witness lower bounds for mixed states, checked against the two-qubit
//! Wootters formula.
//!
//! Run with `cargo run --example mixed_bounds`.

use genconc::bounds::{fermionic_detection, mb_bound, witness_dense, wootters_oracle};
use genconc::projector::DEFAULT_DENSE_CAP;
use genconc::state::{named, MixedState, PureState};
use genconc::tensor::{ParticleKind, SystemShape};

fn main() -> genconc::Result<()> {
    println!("Werner states");
    println!(
        "{:>5} {:>10} {:>10} {:>10} {:>10}",
        "p", "witness", "dense", "lower", "oracle"
    );
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        let rho = named::werner(p)?;
        let r = mb_bound(&rho)?;
        println!(
            "{p:>5.1} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            r.witness,
            witness_dense(&rho, DEFAULT_DENSE_CAP)?,
            r.lower_bound,
            wootters_oracle(&rho)?
        );
    }

    let fermions = SystemShape::new(ParticleKind::Fermion, 2, 4)?;
    let slater_mix = MixedState::from_ensemble(
        &[0.5, 0.5],
        &[
            named::slater(fermions, &[0, 1])?,
            named::slater(fermions, &[2, 3])?,
        ],
    )?;
    let pair = MixedState::from_pure(&named::fermion_pair_superposition());
    let noisy = MixedState::from_ensemble(
        &[0.9, 0.1],
        &[
            named::fermion_pair_superposition(),
            PureState::random_coherent(fermions, 5)?,
        ],
    )?;
    println!("fermions, L=2 N=4");
    for (name, rho) in [
        ("Slater mixture", &slater_mix),
        ("pair", &pair),
        ("noisy pair", &noisy),
    ] {
        let r = fermionic_detection(rho)?;
        println!(
            "  {name:<15} witness {:>9.6}  detected {:<5}  C_f >= {:.6}",
            r.witness, r.detected, r.lower_bound
        );
    }
    Ok(())
}
