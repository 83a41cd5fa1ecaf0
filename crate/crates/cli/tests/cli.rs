use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tropfm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropfm")).args(args).current_dir(dir).env_remove("TROPFM_BUDGET").output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn grid_build_then_verify_then_forests() {
    let dir = tempfile::tempdir().unwrap();
    let o = tropfm(&["grid", "build", "--rays", "2", "--disjoint", "--n", "2", "--out", "fan.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let rep: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("fan.json")).unwrap()).unwrap();
    assert_eq!(rep["result"]["maximal_cones"], 6);
    assert_eq!(rep["tool"], "tropfm");
    assert_eq!(rep["config_hash"].as_str().unwrap().len(), 64);

    let v = tropfm(&["grid", "verify", "fan.json"], dir.path());
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["result"]["file_matches_rebuild"], true);

    let e = tropfm(&["fm", "enumerate", "--base", "fan.json", "--max-codim", "1", "--out", "types.json"], dir.path());
    assert_eq!(e.status.code(), Some(0));
    let d = tropfm(&["fm", "dot", "types.json"], dir.path());
    assert_eq!(d.status.code(), Some(0));
    let text = String::from_utf8(d.stdout).unwrap();
    assert!(text.starts_with("graph \"type0\""));
}

#[test]
fn tampered_fan_file_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    tropfm(&["grid", "build", "--rays", "2", "--full", "--n", "1", "--out", "fan.json"], dir.path());
    let p = dir.path().join("fan.json");
    let mut rep: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    rep["config"]["n"] = 2.into();
    fs::write(&p, rep.to_string()).unwrap();
    let v = tropfm(&["grid", "verify", "fan.json"], dir.path());
    assert_eq!(v.status.code(), Some(1));
    assert_eq!(json(&v)["result"]["file_matches_rebuild"], false);
}

#[test]
fn grid_type_of_points() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("pts.json"), r#"{"n": 2, "r": 2, "coords": [["1/2", "0"], ["1", "3"]]}"#).unwrap();
    let o = tropfm(&["grid", "type", "--points", "pts.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let rep = json(&o);
    assert_eq!(rep["result"]["codim"], 3);
    let bad = tropfm(&["grid", "type", "--disjoint", "--points", "pts.json"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
}

#[test]
fn rigid_types_of_two_points_on_a_segment() {
    let dir = tempfile::tempdir().unwrap();
    let o = tropfm(&["degen", "rigid", "--r", "2", "--n", "2", "--svg", "svg"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["count"], 4);
    assert_eq!(fs::read_dir(dir.path().join("svg")).unwrap().count(), 4);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["degen", "cut", "--r", "2", "--n", "2", "--rho", "1", "--samples", "20"];
    let a = tropfm(&args, dir.path());
    let b = tropfm(&args, dir.path());
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let c = tropfm(&["degen", "cut", "--r", "2", "--n", "2", "--rho", "1", "--samples", "20", "--seed", "7"], dir.path());
    assert_ne!(json(&a)["config_hash"], json(&c)["config_hash"]);
}

#[test]
fn usage_and_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(tropfm(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(tropfm(&["degen", "build", "--r", "1", "--n", "1"], dir.path()).status.code(), Some(2));
    // the origin is not rigid
    let o = tropfm(&["degen", "cut", "--r", "2", "--n", "1", "--rho", "0", "--out", "x.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("x.json").exists());
    assert_eq!(tropfm(&["grid", "build", "--rays", "2", "--n", "3", "--budget", "5"], dir.path()).status.code(), Some(2));
}

#[test]
fn budget_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_tropfm"))
        .args(["grid", "build", "--rays", "2", "--n", "3"])
        .env("TROPFM_BUDGET", "5")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget is 5"));
}

#[test]
fn svg_of_a_configuration() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("mid.json"), r#"{"n": 3, "r": 3, "coords": [["1/2","1/2","0"],["0","1/2","1/2"],["1/2","0","1/2"]]}"#).unwrap();
    let o = tropfm(&["degen", "svg", "--points", "mid.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap().matches("<polygon").count(), 4);
    fs::write(dir.path().join("r4.json"), r#"{"n": 1, "r": 4, "coords": [["1","0","0","0"]]}"#).unwrap();
    let o = tropfm(&["degen", "svg", "--points", "r4.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported dimension"));
}

#[test]
fn failing_cut_exits_one_with_its_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let b = tropfm(&["degen", "rigid", "--r", "3", "--n", "2"], dir.path());
    let rigid = json(&b)["result"]["rigid_types"].as_array().unwrap().clone();
    let rho = rigid.iter().find(|t| t["label"] == "++00+++0--0-0-0-0-+0+").unwrap()["id"].as_u64().unwrap().to_string();
    let o = tropfm(&["degen", "cut", "--r", "3", "--n", "2", "--rho", &rho, "--samples", "20", "--out", "cut.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let rep: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("cut.json")).unwrap()).unwrap();
    let cert = &rep["result"]["certificate"];
    assert_eq!(cert["support_bijective"], false);
    assert!(cert["first_violation"].as_str().unwrap().starts_with("Incompatible"));
}

#[test]
fn accept_single_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let o = tropfm(&["accept", "--only", "6"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[PASS]  6."));
    assert_eq!(json(&o)["result"]["passed"], true);
}
