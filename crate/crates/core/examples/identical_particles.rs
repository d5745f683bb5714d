//! Bosons and fermions: condensates and Slater determinants are the
//! coherent states, and fermionic concurrence is tied to the distinguishable
//! one by `α C_d² − C_f² = α − 1`.
//!
//! Run with `cargo run --example identical_particles`.

use genconc::concurrence::concurrence_pure;
use genconc::state::{named, OccupationVector, PureState, SlaterIndex};
use genconc::tensor::{ParticleKind, SystemShape, C64};

fn main() -> genconc::Result<()> {
    let bosons = SystemShape::new(ParticleKind::Boson, 3, 2)?;
    let phi = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
    let noon = PureState::bosonic_state(
        bosons,
        &[
            (OccupationVector::new(vec![3, 0], 3)?, C64::new(1.0, 0.0)),
            (OccupationVector::new(vec![0, 3], 3)?, C64::new(1.0, 0.0)),
        ],
    )?;
    println!("bosons, L=3 N=2");
    println!(
        "  condensate   C_b = {:.6}",
        concurrence_pure(&PureState::condensate(3, &phi)?)?.value
    );
    println!(
        "  W            C_b = {:.6}",
        concurrence_pure(&named::w_state(3))?.value
    );
    println!("  NOON         C_b = {:.6}", concurrence_pure(&noon)?.value);

    let fermions = SystemShape::new(ParticleKind::Fermion, 2, 4)?;
    let alpha = fermions.alpha();
    let pair = PureState::slater_state(
        fermions,
        &[
            (SlaterIndex::new(vec![0, 1], &fermions)?, C64::new(1.0, 0.0)),
            (SlaterIndex::new(vec![2, 3], &fermions)?, C64::new(1.0, 0.0)),
        ],
    )?;
    println!("fermions, L=2 N=4, alpha = {alpha:.6}");
    println!(
        "  Slater       C_f = {:.3e}",
        concurrence_pure(&PureState::random_coherent(fermions, 3)?)?.value
    );
    println!("  pair         C_f = {:.6}", concurrence_pure(&pair)?.value);

    println!(
        "{:>6} {:>10} {:>10} {:>14}",
        "seed", "C_f", "C_d", "aC_d^2 - C_f^2"
    );
    for seed in 0..5 {
        let psi = PureState::random(fermions, seed)?;
        let cf = concurrence_pure(&psi)?.value;
        let cd = concurrence_pure(&psi.as_kind(ParticleKind::Distinguishable)?)?.value;
        println!(
            "{seed:>6} {cf:>10.6} {cd:>10.6} {:>14.12}",
            alpha * cd * cd - cf * cf
        );
    }

    // a fermionic label on a symmetric state is refused
    match named::bell().as_kind(ParticleKind::Fermion) {
        Err(e) => println!("Bell as fermions: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
