//! Reading and writing the JSON state and density formats, and flat CSV
//! reports for sweeps.
//!
//! Run with `cargo run --example state_files`.

use genconc::concurrence::{concurrence_pure, COHERENCE_TOL};
use genconc::io::{density_to_json, parse_input, parse_state, state_to_json, Input};
use genconc::report::{to_csv, ConcurrenceReport};
use genconc::state::{named, PureState};
use genconc::tensor::{ParticleKind, SystemShape};

const FILES: [&str; 3] = [
    r#"{"kind": "distinguishable", "L": 2, "N": 2, "basis": "product-tensor",
        "amplitudes": [{"index": [1, 2], "re": 0.6, "im": 0.0},
                       {"index": [2, 1], "re": 0.0, "im": 0.8}]}"#,
    r#"{"kind": "boson", "L": 3, "N": 2, "basis": "occupation",
        "amplitudes": [{"index": [2, 1], "re": 1.0, "im": 0.0}]}"#,
    r#"{"kind": "fermion", "L": 2, "N": 4, "basis": "slater",
        "amplitudes": [{"index": [1, 2], "re": 0.7071067811865476, "im": 0.0},
                       {"index": [3, 4], "re": 0.0, "im": 0.7071067811865476}]}"#,
];

fn main() -> genconc::Result<()> {
    let mut rows = Vec::new();
    for text in FILES {
        let psi = parse_state(text)?;
        let mut report = ConcurrenceReport::new(&psi, concurrence_pure(&psi)?, COHERENCE_TOL)?;
        report.source = Some(format!("{}-basis", psi.kind()));
        rows.push(report);
    }
    print!("{}", to_csv(&rows)?);

    // emitted files list nonzero amplitudes in the product-tensor basis
    let psi = PureState::random(SystemShape::new(ParticleKind::Fermion, 2, 3)?, 4)?;
    let text = state_to_json(&psi)?;
    assert_eq!(parse_state(&text)?, psi);
    println!("{text}");

    let werner = density_to_json(&named::werner(0.5)?)?;
    match parse_input(&werner)? {
        Input::Density(rho) => println!("density file with purity {:.4}", rho.purity()),
        Input::State(_) => unreachable!(),
    }
    Ok(())
}
