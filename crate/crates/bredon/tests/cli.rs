use std::process::{Command, Output};

use serde_json::Value;

fn bredon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bredon")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    let out = bredon(args);
    assert!(out.status.success(), "{}", stderr(&out));
    serde_json::from_str(&stdout(&out)).expect("valid JSON")
}

#[test]
fn group_reports() {
    let out = bredon(&["group", "--n", "9", "--deg", "3 - 2*l3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("at level 1: Z/3"), "{}", stdout(&out));

    let v = json(&["group", "--n", "45", "--deg", "0", "--json"]);
    assert_eq!(v["group"]["rank"], 1);
    assert_eq!(v["group"]["torsion"], serde_json::json!([]));
    for key in ["n", "degree", "level", "group", "mackey", "method", "reductions"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn irregular_degree_agrees_with_oracle() {
    let deg = "-2 + l9 + l45 - l3 - l15";
    let engine = json(&["group", "--n", "45", "--deg", deg, "--json"]);
    let oracle = json(&["oracle", "--n", "45", "--deg", deg, "--json"]);
    assert_eq!(engine["group"], oracle["group"]);
    assert_eq!(oracle["method"], "oracle");
    assert!(!engine["reductions"].as_array().unwrap().is_empty());
}

#[test]
fn levels_are_checked() {
    let v = json(&["group", "--n", "9", "--deg", "3 - 2*l3", "--level", "9", "--json"]);
    assert_eq!(v["level"], 9);
    let out = bredon(&["group", "--n", "9", "--deg", "0", "--level", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn integral_multiples() {
    let out = bredon(&["integral", "--raw", "--num", "2,6", "--den", "4"]);
    assert!(stdout(&out).starts_with("2\n"));
    let v = json(&["integral", "--n", "45", "--num", "45", "--den", "9", "--json"]);
    assert_eq!(v["multiple"], 1);
    assert_eq!(v["integral"], true);
    let v = json(&["integral", "--n", "45", "--num", "3,15", "--den", "3,15", "--json"]);
    assert_eq!(v["multiple"], 1);
    let out = bredon(&["integral", "--num", "3", "--den", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn products() {
    let first_line = |x: &str, y: &str| stdout(&bredon(&["mult", "--n", "9", x, y])).lines().next().unwrap().to_string();
    assert_eq!(first_line("gamma9", "gamma9"), "ZERO");
    assert_eq!(first_line("u[9:3]", "u[3:9]"), "3");
    assert_eq!(first_line("a3", "edge(3)"), "ZERO");
    let v = json(&["mult", "--n", "9", "a3", "edge(3)", "--json"]);
    assert_eq!(v["status"], "zero");
    assert_eq!(v["rules"], serde_json::json!(["a-class on an edge class"]));
}

#[test]
fn invalid_omega_is_explained() {
    let out = bredon(&["mult", "--n", "45", "omega(u:9; a:3)", "a3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn bad_input_is_refused() {
    let out = bredon(&["group", "--n", "8", "--deg", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("n must be odd"));

    let out = bredon(&["group", "--n", "9", "--deg", "1 + l5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("'l5'"));

    let out = bredon(&["mult", "--n", "9", "a3", "b7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("b7"), "{}", stderr(&out));

    let out = bredon(&["verify", "--n", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_is_stable_under_reserialization() {
    for args in [
        &["group", "--n", "45", "--deg", "2 - l3 + l9", "--json"][..],
        &["chart", "--n", "9", "--format", "json", "--r", "-1..1", "--m", "-2..2"][..],
        &["verify", "--n", "9", "--max-weight", "1", "--max-m", "2", "--json"][..],
    ] {
        let text = stdout(&bredon(args));
        let v: Value = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&v).unwrap();
        assert_eq!(text.trim_end(), again);
    }
}

#[test]
fn charts() {
    let v = json(&["chart", "--n", "9", "--format", "json", "--r", "2..2", "--m", "0..0"]);
    let cell = v["cells"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["k"] == -2 && c["m"] == 0)
        .expect("cell r=2, k=-2, m=0");
    assert_eq!(cell["symbol"], "[Z+Z/3]");

    let text = stdout(&bredon(&["chart", "--n", "9", "--r", "-1..1", "--m", "-3..3"]));
    assert!(text.contains("legend"));
    assert!(text.contains("dim -2"));

    let out = bredon(&["chart", "--n", "45"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&[
        "chart", "--n", "45", "--format", "json", "--x", "m", "--y", "l9", "--deg", "l3", "--x-range", "-2..2",
        "--y-range", "-1..1",
    ]);
    assert_eq!(v["cells"].as_array().unwrap().len(), 15);
}

#[test]
fn charts_are_deterministic() {
    let args = ["chart", "--n", "25", "--r", "-1..1", "--m", "-4..4"];
    assert_eq!(stdout(&bredon(&args)), stdout(&bredon(&args)));
}

#[test]
fn verify_sweeps_pass() {
    for (n, w, m) in [("9", "3", "8"), ("45", "2", "6")] {
        let out = bredon(&["verify", "--n", n, "--max-weight", w, "--max-m", m]);
        assert!(out.status.success(), "{}", stdout(&out));
        assert!(stdout(&out).trim_end().ends_with("PASS"));
    }
}
