// The binary end to end: exit codes and the JSON report.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_conformalk")).args(args).env("CONFORMALK_THREADS", "2").output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn singular_reports_family_a() {
    let (code, out) = run(&["singular", "--n", "4", "--mu", "-1;1,0", "--dmax", "2", "--json", "-"]);
    assert_eq!(code, 0);
    let json_start = out.find("{\n").expect("json on stdout");
    let v: serde_json::Value = serde_json::from_str(&out[json_start..]).unwrap();
    assert_eq!(v["config"]["n"], 4);
    assert_eq!(v["config"]["threads"], 2);
    assert_eq!(v["report"]["vectors"][0]["family"], "A");
    assert_eq!(v["report"]["vectors"][0]["vector"]["basis"], "dual");
    assert_eq!(v["report"]["vectors"][0]["vector"]["mu"], serde_json::json!(["-1", "1", "0"]));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["singular", "--n", "4", "--mu", "1;1,0", "--dmax", "2"]).0, 0);
    assert_eq!(run(&["singular", "--n", "4", "--mu", "bad"]).0, 2);
    assert_eq!(run(&["singular", "--n", "4", "--mu", "0;-1,0"]).0, 2);
    assert_eq!(run(&["nope"]).0, 2);
    assert_eq!(run(&["contact", "--n", "3", "--side", "minus", "--kmax", "3", "--tmax", "3"]).0, 0);
    // the plus side reports its level-1 defect against the expected class
    let (code, out) = run(&["contact", "--n", "3", "--side", "plus", "--kmax", "2", "--tmax", "3"]);
    assert_eq!(code, 1);
    assert!(out.contains("level 1: total defect 0 (expected 1)"));
}

#[test]
fn scan_and_catalog() {
    let (code, out) = run(&["scan", "--n", "4", "--mu-grid", "-2..4;1", "--dmax", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("reducible").count() - out.matches("irreducible").count(), 2);
    let (code, out) = run(&["catalog", "--n", "4", "--kmax", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("(-2; 2, 0)"));
}
