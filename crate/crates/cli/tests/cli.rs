use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn hardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn sandwich_on_reference_config() {
    let cfg = configs().join("reference.toml");
    let out = hardy(&["sandwich", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["schema_version"], "1.0.0");
    assert_eq!(r["task"], "sandwich");
    let a2 = r["result"]["a2"]["value"].as_f64().unwrap();
    assert!((a2 - (5.0f64 / 3.0).sqrt()).abs() < 1e-6);
    let c = r["result"]["c_near_extremal"].as_f64().unwrap();
    assert!((c - (10.0f64 / 3.0).sqrt()).abs() < 1e-5);
    assert_eq!(r["result"]["sandwich_ok"], true);
    assert!((r["result"]["lower_bound"].as_f64().unwrap() - 0.91287).abs() < 1e-5);
    assert!((r["result"]["upper_bound"].as_f64().unwrap() - 3.65148).abs() < 1e-5);
}

#[test]
fn admissible_on_hyperbolic_plane() {
    let cfg = configs().join("hyperbolic_plane.toml");
    let out = hardy(&["admissible", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["admissible"], true);
    assert_eq!(r["result"]["conditions"].as_array().unwrap().len(), 4);
    assert_eq!(r["result"]["conditions"][0]["name"], "H1");
    assert_eq!(r["result"]["conditions"][0]["relation"], "<0");
}

#[test]
fn scan_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let out_path = dir.path().join("report.json");
    let cfg = configs().join("beta_sweep.toml");
    let out = hardy(&[
        "scan",
        "--config",
        cfg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--threads",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "beta,admissible,boundary,C1,C2,C3,C4");
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[1], "-1,false,true,-1,2,4,0");
    assert_eq!(lines[3], "0,true,false,-1,1,3,-1");
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r["result"]["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn empty_scan_range_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("beta_sweep.toml"))
        .unwrap()
        .replace("stop = 2.0", "stop = -3.0");
    let cfg = write_config(dir.path(), "empty.toml", &text);
    let out = hardy(&["scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("admissibility") && err.contains("empty"), "{err}");
}

#[test]
fn malformed_and_missing_configs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.toml", "space = 3\n");
    assert_eq!(hardy(&["a2", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("nope.toml");
    assert_eq!(
        hardy(&["a2", "--config", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let cfg = configs().join("reference.toml");
    let out = hardy(&["a2", "--config", cfg.to_str().unwrap(), "--csv", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn divergent_dual_weight_is_a_precondition_failure() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("reference.toml"))
        .unwrap()
        .replace("kind = \"power\"\nexponent = 0.0", "kind = \"power\"\nexponent = 2.0");
    let cfg = write_config(dir.path(), "div.toml", &text);
    let out = hardy(&["lemma1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let out = hardy(&["sandwich", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert_eq!(r["result"]["a2"]["class"], "divergent_near_zero");
    assert!(r["result"]["sandwich_ok"].is_null());
    // A divergent A2 is itself the answer to the a2 task.
    let out = hardy(&["a2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn critical_weight_is_indeterminate() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("reference.toml"))
        .unwrap()
        .replace("outer = -2.0", "outer = -1.02");
    let cfg = write_config(dir.path(), "crit.toml", &text);
    let out = hardy(&["a2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn prop2_and_ratio_tasks() {
    let cfg = configs().join("prop2_line.toml");
    let out = hardy(&["prop2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["ok"], true);
    assert!((r["result"]["rhs"]["value"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-9);

    let cfg = configs().join("reference.toml");
    let out = hardy(&["ratio", "--config", cfg.to_str().unwrap(), "--verbose"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["test_function"], "near_extremal");
    assert!((r["result"]["ratio"].as_f64().unwrap() - (10.0f64 / 3.0).sqrt()).abs() < 1e-5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("status Ok"));
}
