use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superinduce")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn omega_grid_for_2_1_1_0() {
    let out = run(&["emit", "omega-grid", "--lambda", "2,1|1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["omega"], serde_json::json!([[4, 2], [2, 0]]));
    assert_eq!(v["zeros"], serde_json::json!([[2, 2]]));
}

#[test]
fn pi_11_at_1_1_round_trips() {
    let out = run(&["emit", "pi-ij", "--lambda", "1|0", "--i", "1", "--j", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["round_trip"], Value::Bool(true));
    assert_eq!(v["element"]["floor"], 1);
}

#[test]
fn seeded_reports_are_byte_identical() {
    let a = run(&["verify", "identities", "--seed", "11"]);
    let b = run(&["verify", "identities", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 11);
    let c = run(&["verify", "identities", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn linkage_graph_is_deterministic() {
    let args = ["emit", "linkage-graph", "--p", "3", "--max-entry", "2"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!json(&a)["odd_edges"].as_array().unwrap().is_empty());
}

#[test]
fn out_flag_writes_the_same_json() {
    let dir = std::env::temp_dir().join(format!("superinduce-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gl22.json");
    let to_file = run(&["verify", "gl22", "--out", path.to_str().unwrap()]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let stdout = run(&["verify", "gl22"]);
    assert_eq!(std::fs::read(&path).unwrap(), stdout.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["typicality"]).status.code(), Some(2));
    assert_eq!(run(&["typicality", "--lambda", "1,0|0", "--p", "2"]).status.code(), Some(2));
    let bad = run(&["emit", "pi-ij", "--lambda", "1,1|0,0", "--i", "1", "--j", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("λ⁺_1 ≠ λ⁺_2"));
    assert_eq!(run(&["lr", "--outer", "2,3", "--inner", "1", "--content", "1"]).status.code(), Some(2));
}

#[test]
fn queries_report_certificates() {
    let v = json(&run(&["linkage", "--lambda", "1,0|0,0", "--mu", "4,3|0,0", "--p", "3"]));
    assert_eq!(v["even_linked"], Value::Bool(true));
    let v = json(&run(&["odd-chain", "--lambda", "2,1|1,0", "--pairs", "[[2,2]]", "--p", "3"]));
    assert_eq!(v["condition_holds"], Value::Bool(true));
    let v = json(&run(&["alcove", "--lambda", "1,0|0", "--p", "5"]));
    assert_eq!(v["in_alcove"], Value::Bool(true));
    let v = json(&run(&["lr", "--outer", "3,2,1", "--inner", "2,1", "--content", "2,1"]));
    assert_eq!(v["coefficient"]["count"], 2);
}

#[test]
fn single_instance_checks() {
    let out = run(&["phi1", "--lambda", "2,1|1,0", "--i", "2", "--j", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["omega"], 0);
    assert_eq!(v["image"]["terms"], serde_json::json!([]));
    let v = json(&run(&["primitive", "--lambda", "2,1|1,0", "--i", "1", "--j", "1", "--p", "3"]));
    assert_eq!(v["primitive"], Value::Bool(true));
    let v = json(&run(&["primitive", "--lambda", "3,3|1,0", "--pairs", "[[1,1],[2,2]]"]));
    assert_eq!(v["in_module"], Value::Bool(false));
}

#[test]
fn verify_lemmas_at_one_size() {
    let out = run(&["verify", "lemmas", "--m", "1", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], Value::Bool(true));
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["anchor"].as_str().is_some()));
}
