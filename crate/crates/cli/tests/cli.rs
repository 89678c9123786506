use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn lensurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lensurf"))
        .args(args)
        .output()
        .unwrap()
}

fn lensurf_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lensurf"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn crosscap_of_l30_11() {
    let out = lensurf(&["crosscap", "--p", "30", "--q", "11"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["crosscap"], 3);
}

#[test]
fn invalid_parameters_exit_2() {
    assert_eq!(
        lensurf(&["triangulate", "--p", "7", "--q", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lensurf(&["triangulate", "--p", "8", "--q", "6"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lensurf(&["crosscap", "--p", "7", "--q", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        lensurf(&["h0", "--p", "7", "--q", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(lensurf(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        lensurf(&["verify-theorem", "--n", "9"]).status.code(),
        Some(2)
    );
    assert_eq!(
        lensurf(&["crosscap", "--p", "8", "--q", "3", "--format", "csv"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_theorem_n2() {
    let out = lensurf(&["verify-theorem", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["euler"], 0);
    assert_eq!(r["orientable"], false);
    assert_eq!(r["connected"], true);
    assert_eq!(r["fundamental_criterion"], true);
    assert_eq!(r["sheets"][0]["count"], 0);
    assert_eq!(r["passed"], true);
}

#[test]
fn output_is_deterministic() {
    let a = lensurf(&["construct", "--n", "3"]);
    let b = lensurf(&["construct", "--n", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_cap_does_not_change_results() {
    let capped = Command::new(env!("CARGO_BIN_EXE_lensurf"))
        .args(["verify-theorem", "--n-range", "2..4"])
        .env("LENSURF_THREADS", "1")
        .output()
        .unwrap();
    let free = lensurf(&["verify-theorem", "--n-range", "2..4"]);
    assert!(capped.status.success());
    assert_eq!(capped.stdout, free.stdout);
}

#[test]
fn schedule_csv() {
    let out = lensurf(&["schedule", "--n", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let tets: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(4).unwrap())
        .collect();
    assert_eq!(tets, ["1", "2", "4", "5"]);
}

#[test]
fn sequence_and_formulae() {
    let out = lensurf(&["sequence", "--n", "3"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        r#"{"kappa":2,"terms":[[0,1],[2,1],[8,3],[30,11]]}"#
    );
    let out = lensurf(&["formulae", "--kappa", "3", "--n", "6"]);
    assert!(out.status.success());
}

#[test]
fn analyze_and_fundamental_check_from_stdin() {
    let h0 = json(&lensurf(&["h0", "--p", "8", "--q", "3"]));
    let qv = h0["qvector"].to_string();
    let out = lensurf_stdin(&["analyze", "--input", "-"], &qv);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["euler"], -2);
    assert_eq!(r["weights"]["E_h"], 1);

    let out = lensurf_stdin(&["fundamental-check", "--coords", "q", "--input", "-"], &qv);
    let r = json(&out);
    assert_eq!(r["verdict"]["status"], "decomposable");
    assert_eq!(r["verdict"]["witness"][1], 1);

    let haken = h0["haken"].to_string();
    let out = lensurf_stdin(
        &["fundamental-check", "--coords", "haken", "--input", "-"],
        &haken,
    );
    assert_eq!(json(&out)["verdict"]["status"], "fundamental");
}

#[test]
fn bad_input_exits_2() {
    let out = lensurf_stdin(&["analyze", "--input", "-"], "{not json");
    assert_eq!(out.status.code(), Some(2));
    let mixed = r#"{"p":8,"q":3,"blocks":[[1,1,0],[0,0,0],[0,0,0],[0,0,0],[0,0,0],[0,0,0],[0,0,0],[0,0,0]]}"#;
    let out = lensurf_stdin(&["analyze", "--input", "-"], mixed);
    assert_eq!(out.status.code(), Some(2));
    let out = lensurf(&["analyze", "--input", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("lensurf-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tri.json");
    let out = lensurf(&[
        "triangulate",
        "--p",
        "8",
        "--q",
        "3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let tri: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(tri["edges"].as_array().unwrap().len(), 10);
    std::fs::remove_dir_all(dir).unwrap();
}
