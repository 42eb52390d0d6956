use std::path::Path;
use std::process::{Command, Output};

fn sftlab(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sftlab"));
    cmd.args(args).env_remove("SFTLAB_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const FLIP: &str = r#"{"shift": {"full_shift": 2}, "automorphisms": {"flip": {"forward": {"memory": 0, "anticipation": 0,
    "rule": [{"window": [0], "output": 1}, {"window": [1], "output": 0}]}, "inverse": "infer"}}}"#;

#[test]
fn analyze_writes_json_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "flip.json", FLIP);
    let json = dir.path().join("out.json");
    let out = sftlab(&["analyze", &file, "--json", json.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("nats"));
    assert!(stdout.contains("flip: |log lambda_phi| <= h_top(phi)"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["units"], "nats");
    assert_eq!(v["summary"]["violated"], 0);
    assert_eq!(v["data"]["automorphisms"][0]["dimension_action"]["S_phi"][0][0], "1/1");
}

#[test]
fn malformed_rule_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.json", r#"{"shift": {"full_shift": 2}, "automorphisms": {"f": {"forward": {"memory": 0, "anticipation": 0, "rule": [{"output": 1}]}, "inverse": "infer"}}}"#);
    let out = sftlab(&["analyze", &file], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("automorphisms.f.forward.rule[0]"));
}

#[test]
fn unknown_automorphism_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "flip.json", FLIP);
    assert_eq!(sftlab(&["analyze", &file, "--auto", "nope"], &[]).status.code(), Some(2));
}

#[test]
fn budget_override_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "flip.json", FLIP);
    let out = sftlab(&["analyze", &file], &[("SFTLAB_BUDGET", "1")]);
    assert_eq!(out.status.code(), Some(3));
    let json = dir.path().join("out.json");
    let out = sftlab(&["analyze", &file, "--json", json.to_str().unwrap()], &[("SFTLAB_BUDGET", "1e6")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["budget"], 1_000_000);
    assert_eq!(v["budget_source"], "SFTLAB_BUDGET");
}

#[test]
fn spectra_check_reports_net_traces() {
    let out = sftlab(&["spectra", "check", "--poly", "[1,-5,-6,1]", "--N", "4"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["net_traces"], serde_json::json!(["5", "32", "207", "1240"]));
    assert_eq!(v["perron"], "Pass");
}

#[test]
fn spectra_search_finds_a_realization() {
    let out = sftlab(&["spectra", "search", "--poly", "[1,-5,-6,1]", "--max-size", "3", "--max-entry", "5", "--budget", "1e6"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["found"], true);
}

#[test]
fn non_monic_polynomial_is_rejected() {
    assert_eq!(sftlab(&["spectra", "check", "--poly", "[2,1]"], &[]).status.code(), Some(2));
}

#[test]
fn profile_suite_emits_profile() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("p.json");
    let out = sftlab(&["suite", "profile", "--json", json.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["data"]["n_max"], 4);
    assert!(v["checks"][0].get("runtime_ms").is_none());
}
