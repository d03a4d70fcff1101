use std::process::{Command, Output};

use serde_json::Value;

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).env_remove("HECKE_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> Value {
    let o = hecke(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn klbasis_s3_lists_six_elements() {
    let o = hecke(&["--n", "3", "klbasis"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "C[123] = (1)H[123]");
    assert_eq!(lines[2], "C[213] = (v)H[123] + (1)H[213]");
    assert_eq!(lines[5], "C[321] = (v^3)H[123] + (v^2)H[132] + (v^2)H[213] + (v)H[231] + (v)H[312] + (1)H[321]");
}

#[test]
fn klbasis_rank_one_is_identity_only() {
    assert_eq!(stdout(&hecke(&["--n", "1", "klbasis"])), "C[1] = (1)H[1]\n");
}

#[test]
fn dual_basis_json_for_s2() {
    let v = json(&["--n", "2", "klbasis", "--basis", "dualkl", "--format", "json"]);
    assert_eq!(v["version"], 1);
    assert_eq!(v["elements"]["12"], serde_json::json!({"12": {"0": 1}, "21": {"1": -1}}));
    assert_eq!(v["elements"]["21"], serde_json::json!({"21": {"0": 1}}));
}

#[test]
fn dual_structure_constants_for_s2() {
    let v = json(&["--n", "2", "structconsts", "--basis", "dualkl", "--format", "json"]);
    let table = v["table"].as_array().unwrap();
    assert_eq!(table.len(), 4);
    let find = |x: &str, y: &str| table.iter().find(|r| r["x"] == x && r["y"] == y).unwrap()["product"].clone();
    assert_eq!(find("12", "12"), serde_json::json!({"12": {"0": 1, "2": 1}}));
    assert_eq!(find("12", "21"), serde_json::json!({"12": {"1": -1}}));
    assert_eq!(find("21", "21"), serde_json::json!({"12": {"0": 1}, "21": {"-1": 1}}));
}

#[test]
fn mult_in_kl_basis() {
    let o = hecke(&["--n", "3", "mult", "--x", "213", "--y", "312"]);
    assert_eq!(stdout(&o), "C[213] C[312] = (1)C[213] + (1)C[321]\n");
}

#[test]
fn cells_counts() {
    let v = json(&["--n", "2", "cells", "--format", "json"]);
    assert_eq!(v["classes"], serde_json::json!([["12"], ["21"]]));
    let v = json(&["--n", "3", "cells", "--format", "json", "--order", "two-sided"]);
    assert_eq!(v["classes"].as_array().unwrap().len(), 3);
    let v = json(&["--n", "3", "cells", "--format", "json"]);
    assert_eq!(v["classes"].as_array().unwrap().len(), 4);
}

#[test]
fn hasse_s4_has_ten_nodes_and_fourteen_edges() {
    let dot = stdout(&hecke(&["--n", "4", "hasse"]));
    assert!(dot.starts_with("graph hasse {"));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 10);
    assert_eq!(dot.lines().filter(|l| l.contains(" -- ")).count(), 14);
    let v = json(&["--n", "4", "hasse", "--format", "json"]);
    assert_eq!(v["edges"].as_array().unwrap().len(), 14);
}

#[test]
fn cyclic_membership_verdicts() {
    let v = json(&["--n", "3", "cyclic", "--gen", "312", "--target", "213", "--check", "membership", "--format", "json"]);
    assert_eq!(v["result"]["verdict"], "non-member");
    let v = json(&["--n", "3", "cyclic", "--gen", "213", "--target", "312", "--check", "membership", "--format", "json"]);
    assert_eq!(v["result"]["verdict"], "member");
    let v = json(&["--n", "4", "cyclic", "--gen", "3214", "--check", "equals-lm", "--format", "json"]);
    assert_eq!(v["equal"], true);
    let v = json(&["--n", "3", "cyclic", "--gen", "321", "--check", "quasi-idempotent", "--format", "json"]);
    assert_eq!(v["scalar"], v["parabolic_scalar"]);
    assert_eq!(v["scalar"], serde_json::json!({"-3": 1, "-1": 2, "1": 2, "3": 1}));
}

#[test]
fn kahrstrom_s4() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kh.json");
    let o = hecke(&["--n", "4", "kahrstrom", "--all", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let ws: Vec<&str> = v["verdicts"].as_array().unwrap().iter().map(|r| r["w"].as_str().unwrap()).collect();
    assert_eq!(ws, ["2143", "3142"]);
    assert_eq!(v["verdicts"][0]["graded_witnesses"][0], serde_json::json!(["1243", "2341"]));
    for scan in ["invariance", "variation", "necessary", "parabolic"] {
        let o = hecke(&["--n", "4", "kahrstrom", "--scan", scan]);
        assert_eq!(o.status.code(), Some(0), "{scan}: {}", stdout(&o));
    }
}

#[test]
fn verify_suites_and_errors() {
    for n in ["1", "2", "3", "4"] {
        let o = hecke(&["--n", n, "verify", "--suite", "paper-tables"]);
        assert!(o.status.success(), "{}", stdout(&o));
    }
    let o = hecke(&["--n", "3", "verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));
    let v = json(&["--n", "3", "verify", "--suite", "identities", "--format", "json"]);
    assert_eq!(v["version"], 1);
}

#[test]
fn large_rank_needs_override() {
    let o = hecke(&["--n", "7", "klbasis"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--allow-large"));
}

#[test]
fn cache_round_trip_keeps_results() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let built = json(&["--n", "4", "--cache-dir", d, "cache", "build", "--format", "json"]);
    assert_eq!(built["built"], true);
    let again = json(&["--n", "4", "--cache-dir", d, "cache", "info", "--format", "json"]);
    assert_eq!(again["built"], false);
    assert_eq!(built["statistics"], again["statistics"]);
    let cold = stdout(&hecke(&["--n", "4", "klbasis", "--format", "json"]));
    let warm = stdout(&hecke(&["--n", "4", "--cache-dir", d, "klbasis", "--format", "json"]));
    assert_eq!(cold, warm);
    let o = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["--n", "4", "klbasis", "--format", "json"])
        .env("HECKE_CACHE_DIR", d)
        .output()
        .unwrap();
    assert_eq!(stdout(&o), cold);
}
