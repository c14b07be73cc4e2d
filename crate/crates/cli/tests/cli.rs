use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tuplesieve")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn narrowest_tuple_report() {
    let v = stdout_json(&run(&["tuples", "narrowest", "--k", "6"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "tuples narrowest");
    assert_eq!(v["report"]["tuple"], serde_json::json!([0, 4, 6, 10, 12, 16]));
    assert_eq!(v["report"]["diameter"], 16);
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let args = ["corr", "pair", "--N", "1e5", "--j", "2"];
    let a = run(&args);
    let b = run(&args);
    let mut threaded = vec!["--threads", "1"];
    threaded.extend(args);
    let c = run(&threaded);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn manifest_replays_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let out = run(&["--out", path(&first), "dist", "probe", "--N", "20000", "--alphas", "0.3,0.5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = dir.path().join("first.json.manifest.json");
    let m: Value = serde_json::from_slice(&fs::read(&manifest).unwrap()).unwrap();
    assert_eq!(m["config"]["command"], serde_json::json!(["dist", "probe"]));
    assert_eq!(m["config"]["params"]["N"], "20000");
    assert!(m["formulas"][0].as_str().unwrap().contains("Θ"));

    let second = dir.path().join("second.json");
    let out = run(&["--config", path(&manifest), "--out", path(&second)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"command": ["corr", "self"], "params": {"N": 1000, "theta": 0.25}}"#).unwrap();
    let v = stdout_json(&run(&["--config", path(&cfg)]));
    assert_eq!(v["report"][0]["N"], 1000);
    let v = stdout_json(&run(&["--config", path(&cfg), "corr", "self", "--N", "2000"]));
    assert_eq!(v["report"][0]["N"], 2000);
    let v = stdout_json(&run(&["--config", path(&cfg), "--R", "7"]));
    assert_eq!(v["report"][0]["R"], 7.0);
}

#[test]
fn config_rejects_unknown_keys_and_mismatched_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"command": ["corr", "self"], "params": {"N": 1000}, "colour": "red"}"#).unwrap();
    assert_eq!(run(&["--config", path(&cfg)]).status.code(), Some(2));
    fs::write(&cfg, r#"{"command": ["corr", "self"], "params": {"N": 1000}}"#).unwrap();
    assert_eq!(run(&["--config", path(&cfg), "tuples", "narrowest", "--k", "3"]).status.code(), Some(2));
}

#[test]
fn exit_statuses() {
    assert_eq!(run(&["tuples", "narrowest", "--k", "6", "--max-diameter", "15"]).status.code(), Some(1));
    assert_eq!(run(&["tuples", "narrowest"]).status.code(), Some(2));
    assert_eq!(run(&["corr", "pair", "--N", "1000", "--j", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--mem-cap", "lots", "tuples", "narrowest", "--k", "3"]).status.code(), Some(2));
    let capped = run(&["--mem-cap", "1K", "sums", "lambda", "--end", "100000", "--R", "5"]);
    assert_eq!(capped.status.code(), Some(3));
    let slow = run(&["--time-cap", "0.001", "corr", "pair", "--N", "1e7", "--j", "2"]);
    assert_eq!(slow.status.code(), Some(3));
    assert_eq!(run(&["sums", "lambda", "--end", "100", "--R", "5", "--binary"]).status.code(), Some(2));
}

#[test]
fn csv_columns_are_stable() {
    let out = run(&["--format", "csv", "corr", "pair", "--N", "10000", "--j", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,N,R,label,empirical,predicted_main,ratio"));
    assert_eq!(lines.count(), 2);

    let out = run(&["--format", "csv", "e2", "gaps", "--limit", "1000", "--r", "1"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("gap,count\n"));
    let out = run(&["--format", "csv", "detect", "first-moment", "--N", "1000", "--lambda", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("form,label,value,weight\n"));
}

#[test]
fn witnesses_go_to_a_side_file() {
    let dir = tempfile::tempdir().unwrap();
    let wit = dir.path().join("w.csv");
    let out = run(&[
        "detect", "heathbrown", "--pairs", "1,0:1,2", "--rho", "0.0714285714285714", "--x", "2000", "--R", "40",
        "--witness-cap", "5", "--witnesses", path(&wit),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["witnesses_truncated"], true);
    let text = fs::read_to_string(&wit).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,event,verified"));
    assert_eq!(lines.filter(|l| l.ends_with(",true")).count(), 5);
}

#[test]
fn help_states_the_formula() {
    let out = run(&["sums", "lambda", "--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Λ_R(n) = Σ_{d|n, d≤R} μ(d) log(R/d)"));
    let out = run(&["detect", "heathbrown", "--help"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("τ(a_i n + b_i)"));
}
