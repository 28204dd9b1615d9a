use std::process::{Command, Output};

use serde_json::Value;

fn masa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_masa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn reduce_to_identity() {
    let out = masa(&["reduce", "abBA"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_out(&out), Value::from("e"));
}

#[test]
fn exceptional_and_horizon() {
    let out = masa(&["exceptional", "--h", "B", "--k", "b", "--gen", "a"]);
    assert_eq!(json_out(&out)["exponents"], serde_json::json!([0]));
    let out = masa(&["horizon", "--x", "B", "--y", "b", "--gen", "a"]);
    assert_eq!(json_out(&out)["K"], 1);
    let out = masa(&["horizon", "--x", "baa", "--y", "aaaB"]);
    assert_eq!(json_out(&out)["K"], 6);
}

#[test]
fn phi_accepts_negative_k() {
    let out = masa(&["phi", "--x", "B", "--y", "b", "--k", "0"]);
    assert_eq!(json_out(&out)["phi"], "e");
    let out = masa(&["phi", "--x", "B", "--y", "b", "--k", "-3"]);
    assert_eq!(json_out(&out)["phi"], "0");
}

#[test]
fn parse_errors_exit_two() {
    let out = masa(&["reduce", "ab#"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 2"));
    let out = masa(&["member", "--subgroup", "aa,b!", "--word", "a"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 4"));
    let out = masa(&["verify", "--suite", "sec9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = masa(&["verify", "--suite", "sec3", "--rank", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = masa(&["verify"]);
    assert_eq!(out.status.code(), Some(2));
    let out = masa(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn member_and_expect_round_trip() {
    let out = masa(&["member", "--subgroup", "aa,ab,ba", "--word", "bb"]);
    let v = json_out(&out);
    assert_eq!(v["member"], true);
    assert_eq!(v["index"], "2");
    let out = masa(&["expect", "--x", "2*e + 3*a - 1/2*aB + i*bb", "--subgroup", "a"]);
    let printed = json_out(&out)["expectation"].as_str().unwrap().to_string();
    assert_eq!(printed, "2*e + 3*a");
    let again = masa(&["expect", "--x", &printed, "--subgroup", "a"]);
    assert_eq!(json_out(&again)["expectation"], printed.as_str());
}

#[test]
fn verify_sec3_passes() {
    let out = masa(&["verify", "--suite", "sec3", "--rank", "2", "--radius", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_out(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 7);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for c in v["checks"].as_array().unwrap() {
        for key in ["check", "paper_eq", "inputs", "lhs", "rhs", "exact", "pass", "witness"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn verify_sec6_passes_and_is_byte_stable() {
    let args = ["verify", "--suite", "sec6", "--samples", "30", "--seed", "3"];
    let a = masa(&args);
    let b = masa(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "suite = \"sec6\"\nseed = 5\nsamples = 12\n").unwrap();
    let cfg = path.to_str().unwrap();
    let out = masa(&["verify", "--config", cfg, "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_out(&out);
    assert_eq!(v["seed"], 9);
    assert_eq!(v["config"]["samples"], 12);
    assert_eq!(v["suite"], "sec6");

    std::fs::write(&path, "colour = 1\n").unwrap();
    let out = masa(&["verify", "--config", cfg, "--suite", "sec3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = masa(&[
        "verify",
        "--suite",
        "affine",
        "--field-bound",
        "16",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.as_bytes(), out.stdout.as_slice());
    assert!(text.starts_with("check,paper_eq,exact,pass,lhs,rhs\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn affine_reports_polynomial() {
    let out = masa(&["affine", "--p", "3", "--d", "2", "--check", "malnormal"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_out(&out);
    assert_eq!(v["checks"][0]["inputs"]["polynomial"], "x^2+1");
    let out = masa(&["affine", "--p", "4", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn matrix_command() {
    let out = masa(&["matrix", "--n", "2", "--suite", "sec7", "--seed", "1", "--restarts", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json_out(&out);
    assert_eq!(v["checks"][0]["model"], "matrix-model");
    let out = masa(&["matrix", "--n", "3", "--suite", "sec7"]);
    assert_eq!(out.status.code(), Some(0));
    let out = masa(&["matrix", "--n", "3", "--suite", "sec2", "--matrix-samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let out = masa(&["matrix", "--n", "2", "--suite", "sec3"]);
    assert_eq!(out.status.code(), Some(2));
}
