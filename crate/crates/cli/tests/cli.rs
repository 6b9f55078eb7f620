//! End-to-end checks of the binary: exit codes, report schemas, config
//! files, and byte-stability across runs.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_chainscope"))
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn cr_report_contains_zero_in_the_recurrent_set() {
    let out = run(&["cr", "--system", "akin", "--grid", "101", "--eps", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["schema"], 1);
    let states = json["states"].as_array().unwrap();
    let zero = states.iter().position(|v| v == 0.0).unwrap();
    let cr: Vec<usize> = json["cr_set"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as usize)
        .collect();
    assert!(cr.contains(&zero));
    assert!(json["witnesses"][zero.to_string()].is_array());
}

#[test]
fn grid_too_small_is_a_validation_error() {
    let out = run(&["cr", "--system", "akin", "--grid", "1", "--eps", "0.05"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_system_is_a_validation_error() {
    let out = run(&["cr", "--system", "henon", "--grid", "11", "--eps", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nested_sigma1_exact_is_infeasible_with_exit_zero() {
    let out = run(&[
        "nested",
        "--system",
        "sigma1",
        "--k",
        "6",
        "--schedule",
        "geometric:0.375,6",
        "--from",
        "1inf",
        "--to",
        "0inf",
        "--mode",
        "exact",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["status"], "infeasible");
    assert_eq!(json["obstruction"]["level"], 6);
}

#[test]
fn exhausted_search_budget_exits_three() {
    let out = run(&[
        "nested",
        "--system",
        "cycle",
        "--cycle-n",
        "5",
        "--schedule",
        "0.1,0.01",
        "--from",
        "0",
        "--to",
        "4",
        "--mode",
        "exact",
        "--search-nodes",
        "1",
        "--walk-len",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["status"], "undecided");
}

#[test]
fn nested_set_mode_reports_transitivity() {
    let out = run(&[
        "nested",
        "--system",
        "cycle",
        "--cycle-n",
        "4",
        "--schedule",
        "0.1,0.01",
        "--set",
        "0,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["transitive"], true);
}

#[test]
fn relations_report_carries_budgets() {
    let out = run(&[
        "relations",
        "--system",
        "square",
        "--grid",
        "11",
        "--eps",
        "0.1",
        "--from",
        "0.9",
        "--to",
        "0",
        "--kmax",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["recurrence"]["Found"]["k"], 5);
    assert_eq!(json["orbit"]["NotFound"]["budget"], 10);
}

#[test]
fn relations_on_word_states() {
    // the universe is shift-closed, so the exact image is itself a sample
    let out = run(&[
        "relations",
        "--system",
        "sigma1",
        "--k",
        "3",
        "--eps",
        "0.3",
        "--from",
        "1110001inf",
        "--to",
        "1inf",
        "--kmax",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // sigma^6 (1^3 0^3 1^inf) = 1^inf exactly
    assert_eq!(json["orbit"]["Found"]["k"], 6);
    assert!(json["recurrence"]["Found"]["k"].as_u64().is_some());
    assert!(json["nonwandering"]["Found"]["k"].as_u64().is_some());
}

#[test]
fn strong_dense_gate() {
    let out = run(&[
        "strong", "--system", "identity", "--grid", "5", "--eps", "0.1", "--dense",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["metrics"][0]["metric"], "d");
    assert_eq!(json["metrics"][0]["values"].as_array().unwrap().len(), 5);
    assert_eq!(json["metrics"][1]["metric"], "sqrt");
    assert!(json["metrics"][1]["values"].is_array());
}

#[test]
fn locate_reports_the_projection_artifact() {
    let out = run(&[
        "locate", "--system", "akin", "--grid", "101", "--from", "0.01",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["artifact_flag"], true);
    assert_eq!(json["cycle"].as_array().unwrap().len(), 1);
}

#[test]
fn dot_export_writes_a_digraph() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let out = run(&[
        "cr",
        "--system",
        "cycle",
        "--cycle-n",
        "3",
        "--eps",
        "0.01",
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph eps_graph {"));
    assert!(text.contains("peripheries=2"));
}

#[test]
fn config_file_matches_flag_invocation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{
            "analysis": "cr",
            "system": "akin",
            "grid_n": 101,
            "eps": 0.05
        }"#,
    )
    .unwrap();
    let via_config = run(&["--config", cfg.to_str().unwrap()]);
    let via_flags = run(&["cr", "--system", "akin", "--grid", "101", "--eps", "0.05"]);
    assert_eq!(via_config.status.code(), Some(0));
    assert_eq!(stdout(&via_config), stdout(&via_flags));
}

#[test]
fn malformed_config_reports_position_and_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{\n  \"analysis\": \"cr\",\n  oops\n}").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("line 3"),
        "diagnostic should name the line: {err}"
    );
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec!["cr", "--system", "akin", "--grid", "101", "--eps", "0.05"],
        vec![
            "nested",
            "--system",
            "sigma1",
            "--k",
            "4",
            "--schedule",
            "geometric:0.375,4",
            "--from",
            "1inf",
            "--to",
            "0inf",
            "--mode",
            "exact",
        ],
        vec![
            "strong", "--system", "square", "--grid", "21", "--eps", "0.05",
        ],
        vec!["paper", "--only", "cycle"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(
            stdout(&a),
            stdout(&b),
            "non-deterministic output for {args:?}"
        );
    }
}

#[test]
fn threads_flag_does_not_change_bytes() {
    let one = run(&[
        "cr",
        "--system",
        "akin",
        "--grid",
        "201",
        "--eps",
        "0.05",
        "--threads",
        "1",
    ]);
    let four = run(&[
        "cr",
        "--system",
        "akin",
        "--grid",
        "201",
        "--eps",
        "0.05",
        "--threads",
        "4",
    ]);
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn paper_only_filters_to_the_sigma1_cases() {
    let out = run(&["paper", "--only", "sigma1"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let names: Vec<&str> = json["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["sigma1-explicit-chain", "sigma1-nested-infeasible"]);
}

#[test]
fn paper_fault_hook_fails_the_chain_case() {
    let out = run(&[
        "paper",
        "--only",
        "sigma1",
        "--fault",
        "sigma1-metric-scale",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sigma1-explicit-chain"));
}

#[test]
fn unmatched_only_filter_is_a_validation_error() {
    let out = run(&["paper", "--only", "nosuchcase"]);
    assert_eq!(out.status.code(), Some(2));
}
