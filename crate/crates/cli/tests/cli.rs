use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn lidstone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lidstone"))
        .args(args)
        .env_remove("LIDSTONE_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = lidstone(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lidstone-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn terms(poly: &Value) -> Vec<(Vec<u64>, String)> {
    poly["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let exp = t["exp"].as_array().unwrap().iter().map(|e| e.as_u64().unwrap()).collect();
            (exp, t["coef"].as_str().unwrap().to_string())
        })
        .collect()
}

#[test]
fn basis_elements() {
    let v = json(&["basis", "-n", "1", "-t", "2", "-i", "1"]);
    assert_eq!(terms(&v), vec![(vec![1], "-1/6".into()), (vec![3], "1/6".into())]);
    assert_eq!(v["degree"], 3);
    let v = json(&["basis", "-n", "2", "-t", "0,0", "-i", "0"]);
    assert_eq!(terms(&v), vec![(vec![0, 0], "1".into()), (vec![0, 1], "-1".into()), (vec![1, 0], "-1".into())]);
}

#[test]
fn exit_codes() {
    assert_eq!(lidstone(&["basis", "-n", "2", "-t", "1,1", "-i", "1"]).status.code(), Some(1));
    assert_eq!(lidstone(&["basis", "-n", "1", "-t", "6", "-i", "0", "--degree-cap", "3"]).status.code(), Some(2));
    assert_eq!(lidstone(&["reconstruct", "--data", "/nonexistent/data.json"]).status.code(), Some(3));
    assert_eq!(lidstone(&["verify", "--expr", "sin(", "-n", "1"]).status.code(), Some(1));
    assert_eq!(lidstone(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(lidstone(&["--help"]).status.code(), Some(0));
    let bad = lidstone(&["verify", "--expr", "x1 +* 2", "-n", "1"]);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("position"));
}

#[test]
fn reconstruct_from_files() {
    let empty = scratch("empty.json", r#"{"n": 2, "entries": []}"#);
    let v = json(&["reconstruct", "--data", empty.to_str().unwrap()]);
    assert!(terms(&v["polynomial"]).is_empty());

    let identity = scratch("identity.json", r#"{"n": 1, "entries": [{"t": [0], "i": 1, "value": "1"}]}"#);
    let v = json(&["reconstruct", "--data", identity.to_str().unwrap(), "--degree-bound", "3"]);
    assert_eq!(terms(&v["polynomial"]), vec![(vec![1], "1".into())]);

    let half = scratch(
        "half.json",
        r#"{"n": 1, "frame": {"points": [["0"], ["1/2"]]}, "entries": [{"t": [0], "i": 1, "value": "1/3"}]}"#,
    );
    let v = json(&["reconstruct", "--data", half.to_str().unwrap()]);
    assert_eq!(terms(&v["polynomial"]), vec![(vec![1], "2/3".into())]);

    let inconsistent = scratch("bad.json", r#"{"n": 1, "entries": [{"t": [4], "i": 0, "value": "1"}]}"#);
    let out = lidstone(&["reconstruct", "--data", inconsistent.to_str().unwrap(), "--degree-bound", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_examples() {
    let v = json(&["verify", "--example", "1", "-n", "2", "--max-norm", "8"]);
    assert_eq!(v["all_pass"], true);
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["value"] == "0"));

    let v = json(&["verify", "--example", "2", "-n", "2", "--max-norm", "6"]);
    assert_eq!(v["all_pass"], true);
    let out = lidstone(&["verify", "--example", "2", "-n", "2", "--max-norm", "6", "--all-even"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failing: Vec<&Value> = v["entries"].as_array().unwrap().iter().filter(|e| e["pass"] == false).collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|e| e["admissible"] == false));

    let v = json(&["verify", "--example", "3", "-n", "1", "--predicate", "integer", "--max-norm", "10"]);
    assert_eq!(v["all_pass"], true);
}

#[test]
fn growth_reports() {
    let quick = ["--r-max", "60", "--r-count", "24"];
    let mut args = vec!["growth", "--expr", "3*x1^2 - 1", "-n", "1"];
    args.extend(quick);
    let v = json(&args);
    assert_eq!(v["condition_1_1"]["verdict"], "satisfied");
    assert_eq!(v["hypotheses_hold"], true);
    assert_eq!(v["certificate"]["pass"], true);

    let v = json(&["growth", "--expr", "sin(pi*x1)", "-n", "1"]);
    let t = v["type_estimates"][0].as_f64().unwrap();
    assert!((t - std::f64::consts::PI).abs() < 0.05 * std::f64::consts::PI, "{t}");
    assert_ne!(v["condition_1_3"]["verdict"], "satisfied");

    let mut args = vec!["growth", "--expr", "sinh(x1)", "-n", "1"];
    args.extend(quick);
    let v = json(&args);
    assert_eq!(v["condition_1_1"]["verdict"], "violated");
}

#[test]
fn expand_reports() {
    let v = json(&["expand", "--expr", "x1^3 - 2*x1", "-n", "1", "-T", "4"]);
    assert_eq!(v["residual"]["grid_max"], 0.0);
    let v = json(&["expand", "--expr", "sinh(x1)/sinh(1)", "-n", "1", "-T", "20"]);
    assert!(v["residual"]["grid_max"].as_f64().unwrap() < 1e-8);
    let v = json(&["expand", "--expr", "sin(pi*x1)", "-n", "1", "-T", "12"]);
    assert!((v["residual"]["grid_max"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["warnings"].as_array().unwrap().iter().any(|w| w.as_str().unwrap().contains("pi")));
}

#[test]
fn seed_and_determinism() {
    let args = ["expand", "--expr", "cosh(x1)", "-n", "1", "-T", "6"];
    let a = lidstone(&args);
    let b = lidstone(&args);
    assert_eq!(a.stdout, b.stdout);
    let seeded = Command::new(env!("CARGO_BIN_EXE_lidstone")).args(args).env("LIDSTONE_SEED", "7").output().unwrap();
    let flag = lidstone(&["--seed", "7", "expand", "--expr", "cosh(x1)", "-n", "1", "-T", "6"]);
    assert_eq!(seeded.stdout, flag.stdout);
    let v: Value = serde_json::from_slice(&seeded.stdout).unwrap();
    assert_eq!(v["residual"]["options"]["seed"], 7);
    assert_ne!(seeded.stdout, a.stdout);
}

#[test]
fn table_output_and_threshold() {
    let out = lidstone(&["--format", "table", "threshold", "-A", "1", "--eta", "0.1"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains('7'));
    let v = json(&["threshold", "-A", "1", "--eta", "0.1"]);
    assert_eq!(v["T0"], 7);
    let path = std::env::temp_dir().join(format!("lidstone-out-{}.json", std::process::id()));
    let out = lidstone(&["-o", path.to_str().unwrap(), "threshold", "-A", "0", "--eta", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["T0"], 9);
}
