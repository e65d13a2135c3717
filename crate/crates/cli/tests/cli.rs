use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn plans() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/plans")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster-mech")).args(args).output().expect("binary runs")
}

fn plan(name: &str) -> String {
    plans().join(name).display().to_string()
}

fn write_plan(dir: &tempfile::TempDir, body: &str) -> String {
    let p = dir.path().join("plan.json");
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn pentagon_trace_matches_golden_file() {
    let out = run(&["mutate", "--plan", &plan("pentagon.json")]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/pentagon_mutate.txt")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn mutate_json_and_steps() {
    let out = run(&["mutate", "--plan", &plan("pentagon.json"), "--json", "--steps", "5"]);
    let v = json(&out);
    let last = &v["trace"][5]["seed"];
    assert_eq!(last["x"], serde_json::json!(["x2", "x1"]));
    assert_eq!(last["y"], serde_json::json!(["y2", "y1"]));
    let out = run(&["mutate", "--plan", &plan("pentagon.json"), "--json", "--steps", "0"]);
    let v = json(&out);
    assert_eq!(v["trace"].as_array().unwrap().len(), 1);
    assert_eq!(v["trace"][0]["seed"]["y"], serde_json::json!(["y1", "y2"]));
    assert_eq!(run(&["mutate", "--plan", &plan("pentagon.json"), "--steps", "6"]).status.code(), Some(2));
}

#[test]
fn empty_sequence_echoes_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_plan(&dir, r#"{"B": [[0,2],[-1,0]], "coefficients": "trivial"}"#);
    let out = run(&["mutate", "--plan", &p]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "step 0: initial seed\n  B = [[0, 2], [-1, 0]]\n  x = [x1, x2]\n  y = [1, 1]\n");
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_plan(&dir, r#"{"B": [[0,1],[-1,0]], "seq": [3]}"#);
    let out = run(&["mutate", "--plan", &p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
    assert_eq!(run(&["mutate", "--plan", "/nonexistent.json"]).status.code(), Some(2));
    let p = write_plan(&dir, "not json");
    assert_eq!(run(&["check-period", "--plan", &p]).status.code(), Some(2));
    assert_eq!(run(&["check-period"]).status.code(), Some(2));
}

#[test]
fn resource_limits_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_plan(&dir, r#"{"B": [[0,1],[-1,0]], "seq": [1,2,1,2,1], "limits": {"term_limit": 2}}"#);
    assert_eq!(run(&["mutate", "--plan", &p]).status.code(), Some(3));
    let p = write_plan(&dir, r#"{"B": [[0,1],[-1,0]], "seq": [1,2,1,2,1], "point": {"u": [400, 0]}}"#);
    let out = run(&["flow", "--plan", &p]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("overflow guard"));
}

#[test]
fn check_period_verdicts() {
    let v = json(&run(&["check-period", "--plan", &plan("pentagon.json"), "--json"]));
    assert_eq!(v["periodic"], true);
    assert_eq!(v["plan"]["sigma"], serde_json::json!([2, 1]));
    assert_eq!(v["sigma_source"], "search");
    assert_eq!(v["signs"], serde_json::json!(["+", "+", "+", "-", "-"]));

    let out = run(&["check-period", "--plan", &plan("involution.json"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["plan"]["sigma"], serde_json::json!([1, 2]));

    let out = run(&["check-period", "--plan", &plan("aperiodic.json"), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["periodic"], false);
    assert_eq!(v["witnesses"][0]["component"], "B");
}

#[test]
fn skipped_symbolic_check_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_plan(&dir, r#"{"B": [[0,1],[-1,0]], "seq": [1,2,1,2,1], "limits": {"max_length": 2}}"#);
    let out = run(&["check-period", "--plan", &p, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["seed_periodic"], Value::Null);
    assert!(v["seed_skipped"].as_str().unwrap().contains("length"));
}

#[test]
fn output_is_deterministic() {
    let args = ["check-period", "--plan", &plan("pentagon.json"), "--json", "--samples", "7", "--rng-seed", "99"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["rng_seed"], 99);
    let args = ["verify-identity", "--plan", &plan("pentagon.json"), "--json", "--samples", "20", "--grid", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn identity_verification() {
    let out = run(&["verify-identity", "--plan", &plan("pentagon.json"), "--json", "--grid", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["points"], 100);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-10);

    let v = json(&run(&["verify-identity", "--plan", &plan("involution.json"), "--json"]));
    assert!(v["max_residual"].as_f64().unwrap() < 1e-13);

    let out = run(&["verify-identity", "--plan", &plan("aperiodic.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("not periodic"));
}

#[test]
fn flow_dump_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("traj.json");
    let out = run(&["flow", "--plan", &plan("pentagon.json"), "--json", "--step", "0.05", "--dump-trajectory", dump.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["action"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(v["periodic"], true);
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    let samples = t["samples"].as_array().unwrap();
    assert_eq!(samples.len(), v["samples"].as_u64().unwrap() as usize);
    for key in ["t", "u", "p", "H", "L"] {
        assert!(samples[0].get(key).is_some(), "{key}");
    }

    // without a dump only the summary is produced
    let v = json(&run(&["flow", "--plan", &plan("pentagon.json"), "--json"]));
    assert_eq!(v["trajectory"], Value::Null);
}

#[test]
fn single_mutation_flow_matches_closed_form() {
    // from u = p = 0 the flow of H_{1,+} moves affinely: u̇₁ = −½ log 2, ṗ₂ = −b₁₂ log 2 / 2
    let dir = tempfile::tempdir().unwrap();
    let p = write_plan(&dir, r#"{"B": [[0,1],[-1,0]], "seq": [1], "point": {"u": [0, 0], "p": [0, 0]}}"#);
    let dump = dir.path().join("traj.json");
    let out = run(&["flow", "--plan", &p, "--json", "--step", "0.125", "--dump-trajectory", dump.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    let l2 = std::f64::consts::LN_2;
    for s in t["samples"].as_array().unwrap() {
        let time = s["t"].as_f64().unwrap();
        let u1 = s["u"][0].as_f64().unwrap();
        let p2 = s["p"][1].as_f64().unwrap();
        assert!((u1 + 0.5 * l2 * time).abs() < 1e-12);
        assert!((p2 + 0.5 * l2 * time).abs() < 1e-12);
    }
}
