use std::io::Write;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn gseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gseq")).args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--output", "json"]);
    let out = gseq(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn assert_usage_error(args: &[&str]) {
    let out = gseq(args);
    assert_eq!(out.status.code(), Some(2), "{args:?}");
    assert!(out.stdout.is_empty(), "stdout should stay empty on error");
    assert!(!out.stderr.is_empty());
}

#[test]
fn closure_of_two_points() {
    assert_eq!(
        json_of(&["closure", "--method", "kernel:1/2,1/2", "--set", "0,1"]),
        json!({"closure": ["0", "1/2", "1"], "complete": true})
    );
}

#[test]
fn second_iterate() {
    let v = json_of(&["iterate", "--method", "kernel:1/2,1/2", "--set", "0,1", "--k", "2"]);
    assert_eq!(v, json!([["0", "1/2", "1"], ["0", "1/4", "1/2", "3/4", "1"]]));
}

#[test]
fn union_is_not_closed() {
    let closed = |s| json_of(&["check-closed", "--method", "kernel:1/2,1/2", "--set", s])["closed"].clone();
    assert_eq!(closed("0"), json!(true));
    assert_eq!(closed("1"), json!(true));
    assert_eq!(closed("0,1"), json!(false));
}

#[test]
fn regularity() {
    assert_eq!(json_of(&["regular", "--method", "kernel:1,1"]), json!({"regular": false}));
    assert_eq!(json_of(&["regular", "--method", "lim+kernel:1/2,-1/2"]), json!({"regular": true}));
    assert_eq!(json_of(&["regular", "--universe", "z3", "--method", "kernel:2,2"]), json!({"regular": true}));
}

#[test]
fn malformed_input_exits_two() {
    assert_usage_error(&["closure", "--method", "kernel:0.5,0.5", "--set", "0,1"]);
    assert_usage_error(&["closure", "--method", "nonsense", "--set", "0,1"]);
    assert_usage_error(&["closure", "--method", "lim", "--set", "0,x"]);
    assert_usage_error(&["closure", "--universe", "z3", "--method", "cesaro", "--set", "0"]);
    assert_usage_error(&["iterate", "--method", "lim", "--set", "0", "--k", "0"]);
    assert_usage_error(&["stat-density", "--prefix", "0,1"]);
    assert_usage_error(&["no-such-command"]);
}

#[test]
fn input_file_and_overrides() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"method": "kernel:1/2,1/2", "set": ["0", "1"]}}"#).unwrap();
    let path = file.path().to_str().unwrap();
    assert_eq!(json_of(&["closure", "--input", path])["closure"], json!(["0", "1/2", "1"]));
    assert_eq!(json_of(&["closure", "--input", path, "--set", "0"])["closure"], json!(["0"]));

    let mut json_method = tempfile::NamedTempFile::new().unwrap();
    write!(json_method, r#"{{"method": {{"kind": "kernel", "coefficients": ["1/2", "1/2"]}}, "set": "0,1"}}"#).unwrap();
    let v = json_of(&["closure", "--input", json_method.path().to_str().unwrap()]);
    assert_eq!(v["closure"], json!(["0", "1/2", "1"]));
}

#[test]
fn densities() {
    let squares: Vec<String> =
        (1..=100).map(|n| if (1..=10).any(|k| k * k == n) { "1" } else { "0" }.to_string()).collect();
    let prefix = squares.join(",");
    // density of the terms outside the ball around the limit
    let v = json_of(&["stat-density", "--prefix", &prefix, "--ell", "0", "--radius", "1/2"]);
    assert_eq!(v["density"], json!("1/10"));
    let v = json_of(&["stat-density", "--prefix", &prefix, "--ell", "1", "--radius", "1/2"]);
    assert_eq!(v["density"], json!("9/10"));
    let v = json_of(&["stat-density", "--seq", "pre:[];cyc:[0,1]", "--n", "10", "--ell", "0", "--radius", "1/2"]);
    assert_eq!(v["density"], json!("1/2"));
    let v = json_of(&[
        "lacunary-density",
        "--prefix",
        &prefix,
        "--ell",
        "0",
        "--radius",
        "1/2",
        "--geometric",
        "2:6",
        "--r",
        "6",
    ]);
    // (32, 64] holds 36, 49 and 64
    assert_eq!(v["density"], json!("3/32"));
    assert_eq!(v["block"], json!([32, 64]));
}

#[test]
fn continuity_verdicts() {
    let v = json_of(&["continuity", "--universe", "z3", "--method", "lim", "--function", "0,0,1"]);
    assert_eq!(v["continuous"], json!(true));
    assert_eq!(v["complete"], json!(true));

    // 0,1,0,1,... has value 2 and is fixed by the map, but f(2) = 0
    let v = json_of(&["continuity", "--universe", "z4", "--method", "kernel:2,2", "--function", "0,1,0,1"]);
    assert_eq!(v["continuous"], json!(false));
    assert_eq!(v["witness"]["point"], json!("2"));
    assert_eq!(v["witness"]["sequence"], json!("pre:[];cyc:[0,1]"));
    let bounded = json_of(&[
        "continuity",
        "--universe",
        "z4",
        "--method",
        "kernel:2,2",
        "--function",
        "0,1,0,1",
        "--period-bound",
        "3",
    ]);
    assert_eq!(bounded["complete"], json!(false));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--universe", "z2,z3", "--method", "lim;kernel:2,-1", "--seed", "3", "--output", "json"];
    let a = gseq(&args);
    let b = gseq(&args);
    let mut sequential = args.to_vec();
    sequential.push("--sequential");
    let c = gseq(&sequential);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    for line in String::from_utf8(a.stdout).unwrap().lines() {
        let record: Value = serde_json::from_str(line).unwrap();
        assert!(record["check"].is_string() && record["status"].is_string());
    }
}

#[test]
fn verify_rejects_unusable_method() {
    assert_usage_error(&["verify", "--universe", "z3", "--method", "kernel:1/2,1/2"]);
    assert_usage_error(&["verify", "--trials", "0"]);
}

#[test]
fn demo_reports_matches() {
    let v = json_of(&["demo"]);
    assert_eq!(v["match"], json!(true));
    assert_eq!(v["closed"]["{0, 1}"]["computed"], json!(false));
}
