use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lti_discretize::cli::document::{DiscreteDocument, SystemDocument, TrajectoryDocument};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lti-discretize"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn discretize_scalar_file() {
    let path = data("scalar.json");
    let o = run(&["discretize", path.to_str().unwrap(), "--dt", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: DiscreteDocument = serde_json::from_str(&stdout(&o)).unwrap();
    let want = 1.5 * (1.0 - (-2f64).exp());
    assert!((doc.qd[0][0] - want).abs() <= 1e-12 * want);
    assert!(stdout(&o).contains(&format!("{:.16e}", doc.qd[0][0])));
    assert_eq!(doc.dt, 1.0);
    assert_eq!(doc.rd, vec![vec![0.04]]);
}

#[test]
fn discretize_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let path = data("double_integrator.json");
    let o = run(&["discretize", path.to_str().unwrap(), "--dt", "0.1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: DiscreteDocument = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(doc.ad.len(), 2);
}

#[test]
fn missing_file_names_path() {
    let o = run(&["discretize", "/nonexistent/sys.json", "--dt", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/sys.json"));
    assert!(o.stdout.is_empty());
}

#[test]
fn zero_dt_rejected() {
    let path = data("scalar.json");
    let o = run(&["discretize", path.to_str().unwrap(), "--dt", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dt must be positive"));
    assert!(o.stdout.is_empty());
}

#[test]
fn invalid_system_lists_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"A": [[0, 1], [0, 0]], "L": [[1], [0], [0]], "C": [[1, 0]], "Q": [[1, 2], [0, 1]]}"#).unwrap();
    let o = run(&["discretize", path.to_str().unwrap(), "--dt", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("L is 3x1") && err.contains("Q"), "{err}");
}

#[test]
fn malformed_json_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(run(&["check", path.to_str().unwrap(), "--dt", "1"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unstable.json");
    std::fs::write(&path, r#"{"A": [[1]], "L": [[1]], "C": [], "Q": [[1]]}"#).unwrap();
    let o = run(&["discretize", path.to_str().unwrap(), "--dt", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("smaller dt"));
    assert!(o.stdout.is_empty());
}

#[test]
fn check_double_integrator_passes() {
    let path = data("double_integrator.json");
    let o = run(&["check", path.to_str().unwrap(), "--dt", "0.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn check_unreachable_tolerance_fails() {
    let path = data("double_integrator.json");
    let o = run(&["check", path.to_str().unwrap(), "--dt", "0.1", "--tol", "1e-17"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn check_zero_steps_rejected() {
    let path = data("double_integrator.json");
    assert_eq!(run(&["check", path.to_str().unwrap(), "--dt", "0.1", "--steps", "0"]).status.code(), Some(2));
}

#[test]
fn simulate_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = data("double_integrator.json");
    let outs: Vec<_> = ["a.json", "b.json"].iter().map(|n| dir.path().join(n)).collect();
    for out in &outs {
        let o = run(&[
            "simulate",
            path.to_str().unwrap(),
            "--dt",
            "0.1",
            "--samples",
            "25",
            "--seed",
            "7",
            "--x0",
            "1,-0.5",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let a = std::fs::read(&outs[0]).unwrap();
    assert_eq!(a, std::fs::read(&outs[1]).unwrap());
    let doc: TrajectoryDocument = serde_json::from_slice(&a).unwrap();
    assert_eq!(doc.states.len(), 26);
    assert_eq!(doc.outputs.len(), 25);
    assert_eq!(doc.seed, Some(7));
    assert_eq!(doc.states[0], vec![1.0, -0.5]);
}

#[test]
fn simulate_without_seed_is_noise_free() {
    let path = data("double_integrator.json");
    let o = run(&["simulate", path.to_str().unwrap(), "--dt", "0.1", "--samples", "10", "--input", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["seed"].is_null());
    let doc: TrajectoryDocument = serde_json::from_value(v).unwrap();
    let last = &doc.states[10];
    assert!((last[0] - 0.5).abs() < 1e-12 && (last[1] - 1.0).abs() < 1e-12);
}

#[test]
fn simulate_x0_mismatch() {
    let path = data("double_integrator.json");
    let o = run(&["simulate", path.to_str().unwrap(), "--dt", "0.1", "--samples", "3", "--x0", "1,2,3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_flags_are_exit_2() {
    assert_eq!(run(&["discretize"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn data_files_round_trip() {
    for name in ["scalar.json", "double_integrator.json"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let doc = SystemDocument::parse(&text).unwrap();
        let again = SystemDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
        doc.to_system().unwrap().validate().unwrap();
    }
}
