use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boolmetric"))
        .args(args)
        .output()
        .unwrap()
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn classify_translated_pair() {
    let path = data("classify_two.json");
    let r = run_json(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(r["invariants"]["X"], json!([[1, 1]]));
    assert_eq!(r["invariants"]["Y"], r["invariants"]["X"]);
    assert_eq!(r["isometric"], json!(true));
    assert_eq!(r["mapping"].as_array().unwrap().len(), 2);
}

#[test]
fn classify_is_deterministic() {
    let path = data("classify_two.json");
    let a = run(&["classify", "--input", path.to_str().unwrap()]);
    let b = run(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn solve_quadratic() {
    let path = data("solve.json");
    let r = run_json(&["solve", "--input", path.to_str().unwrap()]);
    assert_eq!(r["members"], json!([[[0]], [[1]]]));
    let capped = run_json(&["solve", "--input", path.to_str().unwrap(), "--limit", "2"]);
    assert!(capped.get("members").is_none());
    assert!(capped["variety"]["base"].is_array());
}

#[test]
fn interpolate_square() {
    let path = data("interpolate.json");
    let r = run_json(&["interpolate", "--input", path.to_str().unwrap(), "--pretty"]);
    assert_eq!(r["square"]["text"], json!(["X^2"]));
}

#[test]
fn orthogonalize_and_base() {
    let path = data("classify_two.json");
    let r = run_json(&["orthogonalize", "--input", path.to_str().unwrap()]);
    assert_eq!(r["Y"]["elements"].as_array().unwrap().len(), 2);
    let b = run_json(&["base", "--input", path.to_str().unwrap()]);
    assert_eq!(b["X"]["norms"], json!([[1, 1]]));
    assert_eq!(b["Y"]["base"], json!([[2, 2]]));
}

#[test]
fn malformed_input_reports_position() {
    let path = data("malformed.json");
    let out = run(&["solve", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4, column"), "{err}");
}

#[test]
fn missing_input_is_an_error() {
    assert_eq!(run(&["classify"]).status.code(), Some(2));
}

#[test]
fn verify_small_envelope() {
    let path = data("verify_small.json");
    let out = run(&["verify", "--input", path.to_str().unwrap(), "--seed", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report.as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["passed"] == json!(true)));
}

#[test]
fn verify_default_envelope() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
