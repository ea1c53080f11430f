//! End-to-end checks of the command-line interface: outputs, JSON schemas,
//! exit codes, and byte-level determinism.

use std::process::{Command, Output};

fn logcouple(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logcouple"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 output")
}

#[test]
fn eval_prints_vector_literals() {
    let out = logcouple(&["eval", "psi(x)", "--at", "[0,0,5]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "[1, 1, 1]");

    let out = logcouple(&["eval", "psi(x)", "--at", "[0,0,5]", "--psi-names"]);
    assert_eq!(stdout(&out).trim(), "psi_2");

    let out = logcouple(&["eval", "p(x)", "--at", "[1]"]);
    assert_eq!(stdout(&out).trim(), "inf");

    // conditions evaluate to booleans
    let out = logcouple(&["eval", "x = p(s(x))", "--at", "[1,1]"]);
    assert_eq!(stdout(&out).trim(), "true");
}

#[test]
fn normalize_json_matches_schema() {
    let out = logcouple(&["normalize", "p(s(x))", "--format", "json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let pieces = json["pieces"].as_array().expect("pieces array");
    assert_eq!(pieces.len(), 1);
    assert_eq!(pieces[0]["interval"]["lo_level"], 0);
    assert_eq!(pieces[0]["interval"]["hi_level"], serde_json::Value::Null);
    assert_eq!(pieces[0]["fn"]["kind"], "linear");
    assert_eq!(pieces[0]["fn"]["shifts"], serde_json::json!([[0, "1"]]));
    assert_eq!(pieces[0]["fn"]["beta"], serde_json::json!([]));
}

#[test]
fn normalize_text_with_psi_names() {
    let out = logcouple(&["normalize", "psi(x + x)", "--psi-names"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "on [psi_0, inf): psi_0");

    let out = logcouple(&["normalize", "x - s(x)"]);
    assert_eq!(stdout(&out).trim(), "on [psi_0, inf): x - s(x)");
}

#[test]
fn solve_outputs_subsets() {
    let out = logcouple(&["solve", "s(x) < [1,1,1]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "{psi_0}");

    let out = logcouple(&["solve", "x = p(s(x))", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(json["intervals"][0]["lo_level"], 0);
    assert_eq!(json["intervals"][0]["hi_level"], serde_json::Value::Null);
    assert_eq!(json["points"], serde_json::json!([]));
}

#[test]
fn eventual_reports_forms() {
    let out = logcouple(&["eventual", "psi(x)", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(json["kind"], "constant");
    assert_eq!(json["value"], serde_json::json!(["1"]));

    let out = logcouple(&["eventual", "d2(x) + [0,1]", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(json["kind"], "affine");
    assert_eq!(json["slope"], "1/2");
    assert_eq!(json["offset"], serde_json::json!(["0", "1"]));
}

#[test]
fn check_runs_suites_and_is_deterministic() {
    let args = ["check", "--suite", "AC1", "--seed", "7", "--samples", "500"];
    let first = logcouple(&args);
    assert!(first.status.success());
    let second = logcouple(&args);
    assert_eq!(
        first.stdout, second.stdout,
        "identical invocations must match byte for byte"
    );
    assert!(stdout(&first).contains("AC1: 500 cases, 0 failures, PASS"));
}

#[test]
fn check_json_report() {
    let out = logcouple(&[
        "check",
        "--suite",
        "T0",
        "--seed",
        "1",
        "--samples",
        "200",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(json["failed"], 0);
    assert_eq!(json["reports"][0]["suite"], "T0");
    assert_eq!(json["reports"][0]["failures"], serde_json::json!([]));
}

#[test]
fn eval_at_infinity_and_constants() {
    let out = logcouple(&["eval", "s(x)", "--at", "inf"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "inf");

    // constant terms evaluate without --at
    let out = logcouple(&["eval", "psi([0,0,5])"]);
    assert_eq!(stdout(&out).trim(), "[1, 1, 1]");

    let out = logcouple(&["eval", "d2([1,3])", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(json, serde_json::json!(["1/2", "3/2"]));
}

#[test]
fn eventual_threshold_is_reported() {
    let out = logcouple(&["eventual", "p(x - [7])", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(json["kind"], "constant");
    assert_eq!(json["value"], "inf");
    assert!(json["threshold"].is_array());
}

#[test]
fn closure_json_carries_flags() {
    let out = logcouple(&["closure", "--max-level", "2", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let steps = json["steps"].as_array().expect("steps");
    assert_eq!(steps.len(), 3);
    assert_eq!(steps[1]["beta"], serde_json::json!(["1", "1"]));
    assert_eq!(steps[1]["alpha_next"], serde_json::json!(["0", "0", "-1"]));
    for step in steps {
        for flag in [
            "successor_ok",
            "integral_ok",
            "psi_ok",
            "chi_ok",
            "matches_expected",
        ] {
            assert_eq!(step[flag], true, "flag {flag}");
        }
    }
}

#[test]
fn closure_prints_verified_chain() {
    let out = logcouple(&["closure", "--max-level", "5", "--psi-names"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("beta = psi_0"));
    assert!(text.contains("beta = psi_5"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn exit_codes() {
    // usage error: unknown flag
    let out = logcouple(&["eval", "x", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));

    // usage error: term mentions x but no --at
    let out = logcouple(&["eval", "psi(x)"]);
    assert_eq!(out.status.code(), Some(2));

    // usage error: unknown suite
    let out = logcouple(&["check", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).expect("utf8");
    assert!(err.contains("unknown suite"));

    // parse errors carry positions
    let out = logcouple(&["eval", "x + +", "--at", "[]"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).expect("utf8");
    assert!(err.contains("syntax error"));
}
