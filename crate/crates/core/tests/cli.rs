use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn vecdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vecdual"))
        .args(args)
        .output()
        .expect("run vecdual")
}

fn shipped(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("instances")
        .join(name)
        .display()
        .to_string()
}

fn scratch(name: &str, v: &Value) -> String {
    let dir = std::env::temp_dir().join(format!("vecdual-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path.display().to_string()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn e1_with(patch: impl FnOnce(&mut Value)) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(shipped("e1.json")).unwrap()).unwrap();
    patch(&mut v);
    v
}

#[test]
fn dual_of_e1_is_one() {
    let v = stdout_json(&vecdual(&["dual", &shipped("e1.json"), "VD1", "--L", "zero"]));
    assert_eq!(v["frontier"], json!([[1.0]]));
    assert_eq!(v["format"], json!(1));
}

#[test]
fn singleton_frontier_is_minus_bd_k() {
    let set = scratch(
        "single.json",
        &json!({"format": 1, "K": "orthant", "points": [["1", "2"]]}),
    );
    let queries = scratch(
        "single_q.json",
        &json!({"format": 1, "points": [[1, 2], [0, 2], [-5, 2], [1, -3], [0, 0], [2, 3]]}),
    );
    let out = vecdual(&["wsup", &set, &queries]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let labels: Vec<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(
        labels,
        ["FRONTIER", "FRONTIER", "FRONTIER", "FRONTIER", "LOWER", "UPPER"]
    );
}

#[test]
fn farkas_found_and_not_found() {
    // alpha at L = 0 reads x + y >= 0 on the feasible points {1, 3/2, 2}
    let yes = stdout_json(&vecdual(&[
        "farkas",
        &shipped("e1.json"),
        "-i",
        "1",
        "--L",
        "0",
        "--y",
        "1",
    ]));
    assert_eq!(yes["status"], json!("FOUND"));
    let no = stdout_json(&vecdual(&[
        "farkas",
        &shipped("e1.json"),
        "-i",
        "1",
        "--L",
        "0",
        "--y",
        "-3/2",
    ]));
    assert_eq!(no["status"], json!("NOT_FOUND"));
}

#[test]
fn conjugate_of_e1() {
    // sup over x in {0, 1/2, ..., 2} of (2x - x) = 2
    let v = stdout_json(&vecdual(&["conjugate", &shipped("e1.json"), "--L", "[[2]]"]));
    assert_eq!(v["generators_exact"], json!([["2"]]));
}

#[test]
fn verify_short_run_passes() {
    let out = vecdual(&["verify", "decomposition", "--seed", "7", "--trials", "5"]);
    let v = stdout_json(&out);
    assert_eq!(v["failed"], json!(0));
    assert_eq!(v["trials"], json!(5));
}

#[test]
fn input_errors_exit_2_with_distinct_messages() {
    let bad = scratch("bad.json", &json!(null)).replace("bad.json", "not_json.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let malformed = vecdual(&["dual", &bad, "VD1"]);
    let dims = scratch("dims.json", &e1_with(|v| v["F"] = json!([["0", "1"]])));
    let mismatch = vecdual(&["dual", &dims, "VD1"]);
    let empty = scratch("empty.json", &e1_with(|v| v["C"] = json!([0])));
    let infeasible = vecdual(&["dual", &empty, "VD1"]);
    let suite = vecdual(&["verify", "nonsense"]);
    let mut seen = Vec::new();
    for out in [&malformed, &mismatch, &infeasible, &suite] {
        assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(out));
        seen.push(stderr(out));
    }
    assert!(seen[0].contains("malformed"));
    assert!(seen[1].contains("dimension mismatch"));
    assert!(seen[2].contains("empty feasible set"));
    seen.dedup();
    assert_eq!(seen.len(), 4);
}
