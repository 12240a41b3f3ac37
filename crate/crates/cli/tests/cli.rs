use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const C4: &str = "4 4\n0 1\n1 2\n2 3\n3 0\n";

fn ssnc(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ssnc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn digon_is_a_semantic_error_with_line() {
    let o = ssnc(&["analyze"], "2 2\n0 1\n1 0\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn malformed_header_fails() {
    let o = ssnc(&["analyze", "--format", "structured"], "four\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(json_lines(&o)[0]["error"].as_str().unwrap().contains("line 1"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(ssnc(&["analyze", "--bogus"], C4).status.code(), Some(2));
}

#[test]
fn every_graph_command_emits_json() {
    for cmd in ["analyze", "delta", "median", "sed", "snp", "complete", "two-stars", "paths"] {
        let o = ssnc(&[cmd, "--format", "structured"], C4);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let recs = json_lines(&o);
        assert_eq!(recs.len(), 1, "{cmd}");
    }
}

#[test]
fn snp_certificate_names_an_snp_vertex() {
    let rec = &json_lines(&ssnc(&["snp", "--format", "structured"], C4))[0];
    assert_eq!(rec["validated"], Value::Bool(true));
    let analyze = &json_lines(&ssnc(&["analyze", "--format", "structured"], C4))[0];
    let v = &rec["certificate"]["vertex"];
    assert!(analyze["snp"].as_array().unwrap().contains(v));
}

#[test]
fn generate_round_trips_and_respects_seed() {
    let a = ssnc(&["generate", "missing-matching,n=8,k=3", "--seed", "5"], "");
    let b = ssnc(&["generate", "missing-matching,n=8,k=3,seed=5"], "");
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.starts_with("# spec: missing-matching"));
    let rec = &json_lines(&ssnc(&["analyze", "--format", "structured"], &text))[0];
    assert_eq!(rec["n"], 8);
    assert_eq!(rec["missing"].as_array().unwrap().len(), 3);
}

#[test]
fn dot_output_is_a_digraph() {
    let o = ssnc(&["analyze", "--format", "dot"], C4);
    let text = stdout(&o);
    assert!(text.starts_with("digraph D {") && text.contains("0 -> 2 [dir=none"));
    let o = ssnc(&["delta", "--format", "dot"], C4);
    assert!(stdout(&o).starts_with("digraph Delta {"));
}

#[test]
fn verify_quick_passes() {
    let o = ssnc(&["verify", "median-oracle", "--quick", "--format", "structured"], "");
    assert!(o.status.success());
    let recs = json_lines(&o);
    assert!(recs.len() == 2 && recs.iter().all(|r| r["pass"] == Value::Bool(true)));
}

#[test]
fn unknown_verify_target_fails() {
    assert_eq!(ssnc(&["verify", "nope"], "").status.code(), Some(1));
}

#[test]
fn tournament_search_finds_nothing() {
    let o = ssnc(&["search", "tournament", "--format", "structured"], "");
    assert!(o.status.success());
    let rec = &json_lines(&o)[0];
    assert_eq!(rec["exhaustive"], Value::Bool(true));
    assert!(rec["counterexample"].is_null());
}
