use std::io::Write;
use std::process::{Command, Output, Stdio};

use mzv_core::algebra::stuffle;
use mzv_core::double_shuffle::Relation;
use mzv_core::{Composition, LinComb};
use serde_json::Value;

fn mzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzv")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = mzv(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full)).expect("valid JSON")
}

#[test]
fn products() {
    assert_eq!(stdout(&["stuffle", "(2)", "(3)"]), "(2,3) + (3,2) + (5)");
    assert_eq!(stdout(&["shuffle", "10", "10"]), "2*1010 + 4*1100");
    assert_eq!(stdout(&["shuffle", "(2)", "(2)"]), "4*(1,3) + 2*(2,2)");
    assert_eq!(stdout(&["shuffle", "f3", "f5"]), "f3f5 + f5f3");
    assert_eq!(mzv(&["shuffle", "(2)", "10"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(mzv(&["eval", "(bad"]).status.code(), Some(2));
    assert_eq!(mzv(&["eval", "(2,1)"]).status.code(), Some(1));
    assert_eq!(mzv(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(mzv(&["relations", "--weight", "13"]).status.code(), Some(1));
    assert_eq!(mzv(&["feynman", "period", "V=3; 1-2,2-3,3-1"]).status.code(), Some(1));
    assert_eq!(mzv(&["feynman", "psi", "/nonexistent/graph.txt"]).status.code(), Some(2));
    assert_eq!(mzv(&["feynman", "period", "V=4; 1-2", "--samples", "1.5"]).status.code(), Some(2));
    let out = mzv(&["--json", "eval", "(2,1)"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["usage"], Value::Bool(false));
    assert_eq!(v["manifest"]["command"], "eval");
}

#[test]
fn dims_match_the_sequence() {
    let rows = json(&["dims", "--max", "8"]);
    let rows = rows["result"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    for r in rows {
        assert_eq!(r["bound"].as_u64().unwrap().to_string(), r["d"].as_str().unwrap());
        assert_eq!(r["excess"], 0);
    }
    let table = stdout(&["dims", "--table", "13"]);
    let last: Vec<&str> = table.lines().last().unwrap().split_whitespace().collect();
    assert_eq!(last, ["13", "16", "2048", "16", "16"]);
}

#[test]
fn decomposition_and_evaluation() {
    assert_eq!(stdout(&["hoffman-decompose", "(1,3)"]), "(1,3) = 1/3*(2,2)");
    assert_eq!(stdout(&["eval-zeta", "2", "--digits", "30"]), "1.644934066848226436472415166646");
    assert_eq!(stdout(&["eval", "(1,2)", "--digits", "30"]), "1.202056903159594285399738161511");
    let v = json(&["eval", "(2,3)", "--digits", "25"]);
    assert_eq!(v["manifest"]["precision"], 25);
}

#[test]
fn detection() {
    let v = json(&["detect", "(2,3) - 3*(2)*(3)", "(5)", "--digits", "40"]);
    assert_eq!(v["result"]["coefficients"], serde_json::json!(["2", "11"]));
    let v = json(&["detect", "(3,9)", "(5,7)", "(7,5)", "(12)"]);
    assert_eq!(v["result"]["coefficients"], serde_json::json!(["19348", "103650", "116088", "-5197"]));
}

#[test]
fn json_round_trips() {
    let v = json(&["stuffle", "(2,1)", "(3)"]);
    let product: LinComb<Composition> = serde_json::from_value(v["result"]["product"].clone()).unwrap();
    assert_eq!(product, stuffle(&"(2,1)".parse().unwrap(), &"(3)".parse().unwrap()));
    let v = json(&["relations", "--weight", "5"]);
    let rels: Vec<Relation> = serde_json::from_value(v["result"]["relations"].clone()).unwrap();
    assert!(!rels.is_empty() && rels.iter().all(|r| r.weight == 5));
    let again = serde_json::to_value(&rels).unwrap();
    assert_eq!(again, v["result"]["relations"]);
}

#[test]
fn graphs_from_files_and_stdin() {
    let dir = std::env::temp_dir().join(format!("mzv-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k4.txt");
    std::fs::write(&path, "V=4; 1-2,1-3,1-4,2-3,2-4,3-4\n").unwrap();
    let v = json(&["feynman", "psi", path.to_str().unwrap()]);
    assert_eq!(v["result"]["monomials"].as_array().unwrap().len(), 16);
    assert_eq!(v["result"]["matrix_tree_count"], "16");

    let mut child = Command::new(env!("CARGO_BIN_EXE_mzv"))
        .args(["feynman", "check", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"vertices": 4, "edges": [[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("primitive log-divergent: yes"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["--json", "feynman", "period", "V=4; 1-2,1-3,1-4,2-3,2-4,3-4", "--samples", "2e5", "--seed", "7", "--weight", "3"];
    let strip = |mut v: Value| {
        v["manifest"]["wall_time_seconds"] = Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    let a: Value = serde_json::from_str(&stdout(&args)).unwrap();
    let b: Value = serde_json::from_str(&stdout(&args)).unwrap();
    assert_eq!(a["manifest"]["seed"], 7);
    assert_eq!(a["manifest"]["parameters"]["samples"], 200_000);
    assert_eq!(strip(a), strip(b));
}
