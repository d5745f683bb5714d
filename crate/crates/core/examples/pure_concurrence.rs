//! Concurrence of pure states of distinguishable particles.
//!
//! Run with `cargo run --example pure_concurrence`.

use genconc::concurrence::{
    bipartition_value, concurrence_pure, invariant_variance, is_coherent, COHERENCE_TOL,
};
use genconc::state::{named, PureState};
use genconc::tensor::{ParticleKind, SystemShape};

fn main() -> genconc::Result<()> {
    let three_qubits = SystemShape::new(ParticleKind::Distinguishable, 3, 2)?;
    let states = [
        ("Bell", named::bell()),
        ("GHZ(3)", named::ghz(3)),
        (
            "W(3)",
            named::w_state(3).as_kind(ParticleKind::Distinguishable)?,
        ),
        ("product", PureState::random_coherent(three_qubits, 1)?),
        ("Haar", PureState::random(three_qubits, 1)?),
    ];

    println!(
        "{:<8} {:>10} {:>10} {:>9}  bipartition values",
        "state", "C_d", "variance", "coherent"
    );
    for (name, psi) in &states {
        let c = concurrence_pure(psi)?;
        let verdict = is_coherent(psi, COHERENCE_TOL)?;
        let sites: Vec<String> = (0..psi.shape().particles())
            .map(|i| bipartition_value(psi, i).map(|v| format!("{v:.4}")))
            .collect::<Result<_, _>>()?;
        println!(
            "{name:<8} {:>10.6} {:>10.6} {:>9}  [{}]",
            c.value,
            invariant_variance(psi)?,
            verdict.coherent,
            sites.join(", ")
        );
    }
    Ok(())
}
