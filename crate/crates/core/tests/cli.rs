use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_conepencil")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(doc: &Value) {
    let v = schema();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn analyze_reports_hemisphere_values() {
    let (code, stdout, _) = run(&["analyze"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_valid(&doc);
    let r = &doc["result"];
    assert!((r["M"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!((r["eigenvalue"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    assert!((r["Theta_Omega"].as_f64().unwrap() - 6.0).abs() < 1e-6);
    assert!((r["p_min"].as_f64().unwrap() - 1.5938539571740702).abs() < 1e-9);
    assert_eq!(doc["command"], "analyze");
    assert_eq!(doc["config"]["seed"], 42);
    assert!(doc["content_sha256"].as_str().unwrap().len() == 64);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let (code, _, _) = run(&["--cap-angle", "1.2", "--seed", "7", "--out", a.to_str().unwrap(), "analyze"]);
        assert_eq!(code, 0);
        outputs.push(std::fs::read(&a).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let doc: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_valid(&doc);
}

#[test]
fn phi_table_csv_contains_zero_row() {
    let (code, stdout, _) = run(&["--M", "1", "phi-table"]);
    assert_eq!(code, 0);
    assert!(stdout.lines().any(|l| l.starts_with("# content_sha256")));
    let rows: Vec<&str> = stdout.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "t,phi,excess");
    let zero = rows.iter().find(|l| l.starts_with("0,") || l.starts_with("0.0,") || l.starts_with("0.000")).unwrap();
    let phi: f64 = zero.split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(phi, 0.0);
    let (_, again, _) = run(&["--M", "1", "phi-table"]);
    assert_eq!(stdout, again);
}

#[test]
fn phi_table_json_with_explicit_exponent() {
    let (code, stdout, _) = run(&["--M", "2", "--format", "json", "phi-table"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_valid(&doc);
    assert_eq!(doc["config"]["M"], 2.0);
}

#[test]
fn pencil_scan_passes_on_coarse_mesh() {
    let (code, stdout, _) = run(&["--mesh", "32", "--modes", "1", "pencil-scan"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_valid(&doc);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["result"]["flagged"].as_array().unwrap().len(), 0);
}

#[test]
fn kernel_verify_small_run_is_schema_valid() {
    let (code, stdout, stderr) = run(&["--levels", "2", "--suite-size", "1", "--p", "2", "kernel-verify"]);
    assert_eq!(code, 0, "{stderr}");
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_valid(&doc);
    assert_eq!(doc["passed"], true);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["--nu", "0.6", "analyze"],
        vec!["--cap-angle", "0", "analyze"],
        vec!["--dim", "2", "analyze"],
        vec!["--dim", "4", "kernel-verify"],
        vec!["--levels", "1", "kernel-verify"],
        vec!["no-such-command"],
    ] {
        let (code, _, stderr) = run(&args);
        assert_eq!(code, 2, "{args:?}: {stderr}");
        assert!(!stderr.is_empty());
    }
}

#[test]
fn unwritable_output_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.json");
    let (code, _, stderr) = run(&["--out", target.to_str().unwrap(), "phi-table"]);
    assert_ne!(code, 0);
    assert!(!stderr.is_empty());
}
