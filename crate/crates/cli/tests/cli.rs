use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples").join(name)
}

fn rhdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhdim")).args(args).output().expect("binary runs")
}

fn with_workspace(ws: &PathBuf, args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--workspace", ws.to_str().unwrap()];
    all.extend_from_slice(args);
    let out = rhdim(&all);
    let report: Value = serde_json::from_slice(&out.stdout).expect("JSON on stdout");
    (out.status.code().unwrap(), report)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rhdim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn resolve_residue_field() {
    let (code, rep) = with_workspace(&example("plane.json"), &["resolve", "k", "--window", "4"]);
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["betti"], serde_json::json!([1, 2, 4, 8, 16]));
    assert_eq!(rep["window"], 4);
    assert!(rep["version"].is_string());
}

#[test]
fn verify_shipped_certificates() {
    for (ws, cert) in [("plane.json", "cert_k"), ("cubic.json", "cert_N"), ("square_zero_e3.json", "cert_k")] {
        let (code, rep) = with_workspace(&example(ws), &["reduce", "verify", cert, "--window", "10"]);
        assert_eq!(code, 0, "{ws}");
        assert_eq!(rep["result"]["report"]["verdict"], "accept");
    }
}

#[test]
fn ext_residue_field_into_ring() {
    let (code, rep) = with_workspace(&example("plane.json"), &["ext", "k", "R", "--window", "10"]);
    assert_eq!(code, 0);
    let dims = rep["result"]["dims"].as_array().unwrap();
    assert_eq!(dims.len(), 11);
    assert!(dims.iter().all(|d| d.as_u64().unwrap() >= 1));
}

#[test]
fn tampered_certificate_rejected() {
    let src = std::fs::read_to_string(example("plane.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&src).unwrap();
    let iso = &mut doc["certificates"]["cert_k"]["steps"][0]["iso"]["data"];
    let first = iso[0].as_str().unwrap().to_string();
    iso[0] = Value::String(if first == "0" { "1".into() } else { "0".into() });
    let p = scratch("tampered.json", &doc.to_string());
    let (code, rep) = with_workspace(&p, &["reduce", "verify", "cert_k"]);
    assert_eq!(code, 1);
    assert_eq!(rep["result"]["report"]["verdict"], "reject");
}

#[test]
fn schema_errors_exit_2_with_pointer() {
    let src = std::fs::read_to_string(example("cubic.json")).unwrap();
    let bad = src.replacen("\"x^2\"", "\"x^^2\"", 1);
    let p = scratch("bad.json", &bad);
    let (code, rep) = with_workspace(&p, &["algebra", "info"]);
    assert_eq!(code, 2);
    assert_eq!(rep["error"]["pointer"], "/modules/M/element");

    let prime = src.replacen("\"p\": 2", "\"p\": 4", 1);
    let p = scratch("prime.json", &prime);
    let (code, rep) = with_workspace(&p, &["algebra", "info"]);
    assert_eq!(code, 2);
    assert_eq!(rep["error"]["pointer"], "/algebra/p");

    let (code, rep) = with_workspace(&example("cubic.json"), &["dual", "nope"]);
    assert_eq!(code, 2);
    assert_eq!(rep["error"]["kind"], "input");
}

#[test]
fn search_then_reports_are_deterministic() {
    let args = ["reduce", "search", "k", "--max-a", "9", "--max-r", "1"];
    let ws = example("square_zero_e3.json");
    let mut all = vec!["--workspace", ws.to_str().unwrap()];
    all.extend_from_slice(&args);
    let (a, b) = (rhdim(&all), rhdim(&all));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rep: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(rep["result"]["parameters"], serde_json::json!([[9, 1, 1]]));
}

#[test]
fn absent_certificate_and_precondition_failures_exit_1() {
    let (code, rep) = with_workspace(&example("plane.json"), &["reduce", "search", "C", "--target", "gdim"]);
    assert_eq!(code, 1);
    assert_eq!(rep["result"]["found"], false);
    let (code, rep) = with_workspace(&example("plane.json"), &["pushforward", "C"]);
    assert_eq!(code, 1);
    assert_eq!(rep["error"]["kind"], "computation");
}

#[test]
fn theorem_reports() {
    let (code, rep) = with_workspace(&example("cubic.json"), &["theorem", "main", "N", "cert_N"]);
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["applicable"], true);
    let (code, rep) = with_workspace(&example("plane.json"), &["theorem", "cor33"]);
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["counterexample"], Value::Null);
    let (code, rep) = with_workspace(&example("plane.json"), &["theorem", "main", "k", "cert_k"]);
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["applicable"], false);
}

#[test]
fn corpus_filter() {
    let out = rhdim(&["corpus", "run", "--filter", "example_"]);
    assert_eq!(out.status.code(), Some(0));
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = rep["result"]["fixtures"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), 3);
}

#[test]
fn missing_workspace_is_an_input_error() {
    let out = rhdim(&["algebra", "info"]);
    assert_eq!(out.status.code(), Some(2));
}
