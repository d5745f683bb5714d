use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use genconc::io::{density_to_json, state_to_json};
use genconc::state::{named, MixedState, PureState};
use genconc::tensor::{ParticleKind, SystemShape};
use serde_json::Value;

fn genconc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genconc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn concurrence_of_bell_and_slater_files() {
    let dir = tempfile::tempdir().unwrap();
    let bell = write(
        dir.path(),
        "bell.json",
        &state_to_json(&named::bell()).unwrap(),
    );
    let out = genconc(&["concurrence", s(&bell)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["concurrence"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["coherent"], false);
    assert_eq!(v["bipartition_values"].as_array().unwrap().len(), 2);

    let slater = r#"{"kind":"fermion","L":2,"N":4,"basis":"slater",
        "amplitudes":[{"index":[2,4],"re":0,"im":1}]}"#;
    let path = write(dir.path(), "slater.json", slater);
    let v = json(&genconc(&["concurrence", s(&path)]));
    assert!(v["concurrence"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["coherent"], true);
}

#[test]
fn evaluation_paths_agree_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let psi = PureState::random(SystemShape::new(ParticleKind::Boson, 3, 2).unwrap(), 4).unwrap();
    let path = write(dir.path(), "b.json", &state_to_json(&psi).unwrap());
    let values: Vec<f64> = ["purity", "two-copy", "dense"]
        .iter()
        .map(|m| {
            json(&genconc(&["concurrence", s(&path), "--method", m]))["concurrence"]
                .as_f64()
                .unwrap()
        })
        .collect();
    assert!((values[0] - values[1]).abs() < 1e-10 && (values[0] - values[2]).abs() < 1e-10);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"kind\": ");
    assert_eq!(genconc(&["concurrence", s(&bad)]).status.code(), Some(2));
    assert_eq!(
        genconc(&["concurrence", "/nonexistent/x.json"])
            .status
            .code(),
        Some(2)
    );
    let unnormalized = r#"{"kind":"distinguishable","L":1,"N":2,"basis":"product-tensor",
        "amplitudes":[{"index":[1],"re":0.5,"im":0}]}"#;
    let p = write(dir.path(), "u.json", unnormalized);
    assert_eq!(genconc(&["concurrence", s(&p)]).status.code(), Some(2));
    assert_eq!(genconc(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn kind_violations_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bell = write(
        dir.path(),
        "bell.json",
        &state_to_json(&named::bell()).unwrap(),
    );
    // the Bell state is symmetric but not antisymmetric
    assert_eq!(
        genconc(&["concurrence", s(&bell), "--kind", "fermion"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        genconc(&["concurrence", s(&bell), "--kind", "boson"])
            .status
            .code(),
        Some(0)
    );
    let werner = write(
        dir.path(),
        "w.json",
        &density_to_json(&named::werner(0.3).unwrap()).unwrap(),
    );
    assert_eq!(
        genconc(&["bound", s(&werner), "--kind", "boson"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn bound_reports() {
    let dir = tempfile::tempdir().unwrap();
    let werner = write(
        dir.path(),
        "werner.json",
        &density_to_json(&named::werner(0.8).unwrap()).unwrap(),
    );
    let v = json(&genconc(&["bound", s(&werner)]));
    assert!((v["witness"].as_f64().unwrap() - 0.115).abs() < 1e-12);
    assert_eq!(v["detected"], true);
    let dense = json(&genconc(&["bound", s(&werner), "--method", "dense"]));
    assert!((dense["witness"].as_f64().unwrap() - 0.115).abs() < 1e-10);

    let shape = SystemShape::new(ParticleKind::Distinguishable, 2, 2).unwrap();
    let mm = write(
        dir.path(),
        "mm.json",
        &density_to_json(&MixedState::maximally_mixed(shape).unwrap()).unwrap(),
    );
    let v = json(&genconc(&["bound", s(&mm)]));
    assert_eq!(v["detected"], false);
    assert!((v["witness"].as_f64().unwrap() + 0.125).abs() < 1e-12);

    let f = SystemShape::new(ParticleKind::Fermion, 2, 4).unwrap();
    let mix = MixedState::from_ensemble(
        &[0.5, 0.5],
        &[
            named::slater(f, &[0, 1]).unwrap(),
            named::slater(f, &[2, 3]).unwrap(),
        ],
    )
    .unwrap();
    let p = write(dir.path(), "mix.json", &density_to_json(&mix).unwrap());
    let v = json(&genconc(&["bound", s(&p)]));
    assert_eq!(v["detected"], false);
    assert_eq!(v["form"], "fermionic-quadratic");
}

#[test]
fn roof_reports() {
    let dir = tempfile::tempdir().unwrap();
    let psi = PureState::random(SystemShape::new(ParticleKind::Fermion, 2, 4).unwrap(), 8).unwrap();
    let c = genconc::concurrence::concurrence_pure(&psi).unwrap().value;
    let pure = write(
        dir.path(),
        "pure.json",
        &density_to_json(&MixedState::from_pure(&psi)).unwrap(),
    );
    let v = json(&genconc(&["roof", s(&pure), "--restarts", "1"]));
    assert!((v["value"].as_f64().unwrap() - c).abs() < 1e-9);
    assert_eq!(v["decomposition"]["states"][0]["basis"], "product-tensor");

    let werner = write(
        dir.path(),
        "werner.json",
        &density_to_json(&named::werner(0.8).unwrap()).unwrap(),
    );
    let v = json(&genconc(&["roof", s(&werner)]));
    let value = v["value"].as_f64().unwrap();
    assert!((0.35 - 1e-9..=0.35 * 1.02).contains(&value), "{value}");

    let rho = MixedState::random(
        SystemShape::new(ParticleKind::Distinguishable, 2, 3).unwrap(),
        3,
        2,
    )
    .unwrap();
    let p = write(dir.path(), "r.json", &density_to_json(&rho).unwrap());
    let one = json(&genconc(&["roof", s(&p), "--restarts", "1", "--seed", "5"]))["value"]
        .as_f64()
        .unwrap();
    let many = json(&genconc(&[
        "roof",
        s(&p),
        "--restarts",
        "64",
        "--seed",
        "5",
    ]))["value"]
        .as_f64()
        .unwrap();
    assert!(many <= one);
}

#[test]
fn roof_options_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let werner = write(
        dir.path(),
        "werner.json",
        &density_to_json(&named::werner(0.8).unwrap()).unwrap(),
    );
    let opts = write(
        dir.path(),
        "opts.json",
        r#"{"restarts": 3, "seed": 11, "ensemble_size": 5}"#,
    );
    let v = json(&genconc(&["roof", s(&werner), "--options", s(&opts)]));
    assert_eq!(v["restarts_used"], 3);
    assert_eq!(v["decomposition"]["weights"].as_array().unwrap().len(), 5);
    let v = json(&genconc(&[
        "roof",
        s(&werner),
        "--options",
        s(&opts),
        "--restarts",
        "2",
    ]));
    assert_eq!(v["restarts_used"], 2);
    assert_eq!(
        genconc(&["roof", s(&werner), "--ensemble-size", "3"])
            .status
            .code(),
        Some(2)
    );
    let typo = write(dir.path(), "typo.json", r#"{"restart": 3}"#);
    assert_eq!(
        genconc(&["roof", s(&werner), "--options", s(&typo)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn healthcheck_exit_codes() {
    // distinguishable and fermionic projectors pass on the whole grid
    for kind in ["distinguishable", "fermion"] {
        let out = genconc(&["healthcheck", "--kind", kind]);
        assert_eq!(out.status.code(), Some(0), "{kind}");
        assert!(json(&out)
            .as_array()
            .unwrap()
            .iter()
            .all(|r| r["passed"] == true));
    }
    let out = genconc(&["healthcheck", "--kind", "fermion", "--L", "2", "--N", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)[0];
    assert!(r["highest_weight_defect"].as_f64().unwrap() <= 1e-10);
    assert!((r["alpha"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-15);

    // the bosonic compression is not idempotent, so the full grid reports failure
    let out = genconc(&["healthcheck"]);
    assert_eq!(out.status.code(), Some(5));
    let failing: Vec<_> = json(&out)
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["passed"] == false)
        .map(|r| r["tag"].as_str().unwrap().to_string())
        .collect();
    assert!(!failing.is_empty() && failing.iter().all(|t| t == "Pb"));

    let out = genconc(&[
        "healthcheck",
        "--kind",
        "fermion",
        "--L",
        "2",
        "--N",
        "4",
        "--dense-cap",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let out = genconc(&["healthcheck", "--kind", "fermion", "--L", "3", "--N", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn random_files_are_deterministic_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = genconc(&[
            "random",
            "--kind",
            "fermion",
            "--L",
            "2",
            "--N",
            "4",
            "--seed",
            "7",
            "-o",
            s(p),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let expected =
        PureState::random(SystemShape::new(ParticleKind::Fermion, 2, 4).unwrap(), 7).unwrap();
    let c = genconc::concurrence::concurrence_pure(&expected)
        .unwrap()
        .value;
    let v = json(&genconc(&["concurrence", s(&a)]));
    assert_eq!(v["concurrence"].as_f64().unwrap(), c);

    let out = genconc(&[
        "random", "--kind", "boson", "--L", "2", "--N", "3", "--rank", "2", "--seed", "1",
    ]);
    let v = json(&out);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 9);
    assert_eq!(
        genconc(&["random", "--kind", "fermion", "--L", "2", "--N", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        genconc(&["random", "--kind", "boson", "--L", "2", "--N", "2", "--rank", "9"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn batch_directory_keeps_input_order() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "1-bell.json",
        &state_to_json(&named::bell()).unwrap(),
    );
    write(
        dir.path(),
        "2-ghz.json",
        &state_to_json(&named::ghz(3)).unwrap(),
    );
    write(
        dir.path(),
        "3-w.json",
        &state_to_json(&named::w_state(3)).unwrap(),
    );
    write(dir.path(), "notes.txt", "ignored");
    let out = genconc(&["concurrence", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let values: Vec<f64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["concurrence"].as_f64().unwrap())
        .collect();
    let expected = [0.5, (3.0f64 / 8.0).sqrt(), (1.0f64 / 3.0).sqrt()];
    assert_eq!(values.len(), 3);
    for (a, b) in values.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(v[0]["source"].as_str().unwrap().ends_with("1-bell.json"));

    let csv_path = dir.path().join("out.csv");
    let out = genconc(&["concurrence", s(dir.path()), "--csv", "-o", s(&csv_path)]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv_path).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("source,kind,L,N,concurrence"));
}

#[test]
fn batch_failure_is_reported_in_place() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "a.json",
        &state_to_json(&named::bell()).unwrap(),
    );
    write(dir.path(), "b.json", "[]");
    write(
        dir.path(),
        "c.json",
        &state_to_json(&named::ghz(3)).unwrap(),
    );
    let out = genconc(&["concurrence", s(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[1]["exit_code"], 2);
    assert!(v[2]["concurrence"].is_number());
}

#[test]
fn schmidt_report() {
    let dir = tempfile::tempdir().unwrap();
    let ghz = write(
        dir.path(),
        "ghz.json",
        &state_to_json(&named::ghz(3)).unwrap(),
    );
    let v = json(&genconc(&["schmidt", s(&ghz), "--site", "2"]));
    assert_eq!(v["rank"], 2);
    let c = v["coefficients"].as_array().unwrap();
    assert!((c[0].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    assert_eq!(
        genconc(&["schmidt", s(&ghz), "--site", "4"]).status.code(),
        Some(2)
    );
}
