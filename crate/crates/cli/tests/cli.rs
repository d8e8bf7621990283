use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn modjet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modjet")).args(args).output().expect("binary runs")
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn json_of(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    let errors: Vec<String> = schema().iter_errors(&v).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:?}");
    v
}

#[test]
fn locate_intro_example() {
    let out = modjet(&["locate", "--poly", "X^4*Y1^2 + Y0*(Y0-1728)", "--mrange", "5..10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 6);
    for c in certs {
        assert_eq!(c["count"], 1);
        assert!(c["winding_residual"].as_f64().unwrap() < 0.25);
    }
}

#[test]
fn density_rejects_y1() {
    let out = modjet(&["density", "--poly", "Y1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["verdict"]["kind"], "rejected");
    assert!(v["verdict"]["reason"].as_str().unwrap().contains("Y1"));
}

#[test]
fn density_y2_is_reproducible() {
    let run = || {
        let out = modjet(&["density", "--poly", "Y2", "--seed", "7"]);
        assert_eq!(out.status.code(), Some(0));
        let mut v = json_of(&out);
        assert_eq!(v["verdict"]["kind"], "dense-witnessed");
        v["timings"] = Value::Null;
        v
    };
    let a = run();
    assert!(a["orbitKeys"].as_array().unwrap().len() >= 5);
    assert_eq!(a["rank"]["passed"], true);
    assert_eq!(a, run());
}

#[test]
fn sequential_matches_parallel() {
    let args = ["locate", "--poly", "X^4*Y1^2 + Y0*(Y0-1728)", "--mrange", "5..7"];
    let mut a = json_of(&modjet(&args));
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let mut b = json_of(&modjet(&seq));
    a["timings"] = Value::Null;
    b["timings"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn eval_growth_orders_validate() {
    let v = json_of(&modjet(&["eval", "Y0 - 1728", "--z", "0,1"]));
    assert!(v["details"]["errorBound"].as_f64().unwrap() < 1e-25);
    let v = json_of(&modjet(&["growth", "Y1^2 - Y0*Y2", "--gamma", "0,-1,1,0"]));
    assert_eq!(v["details"]["order"]["internal"]["e"], -2);
    assert_eq!(v["details"]["order"]["internal"]["d"], 3);
    assert_eq!(v["details"]["order"]["paper"]["d"], -3);
    let v = json_of(&modjet(&["orders", "Y1"]));
    let measured = v["details"]["measured"].as_array().unwrap();
    assert_eq!(measured[0]["order"], 2);
    assert_eq!(measured[1]["order"], 1);
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("roots.csv");
    let out = modjet(&[
        "locate",
        "X^4*Y1^2 + Y0*(Y0-1728)",
        "--mrange",
        "5,6",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "re,im,residual,orbit_key_re,orbit_key_im");
    assert_eq!(lines.len(), 3);
}

#[test]
fn errors_exit_one() {
    let out = modjet(&["eval", "Y3", "--z", "0,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let out = modjet(&["repro", "missing"]);
    assert_eq!(out.status.code(), Some(1));
    let out = modjet(&["eval", "Y0", "--z", "0,1", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/x.json"));
}

#[test]
fn repro_lists_and_runs() {
    let v = json_of(&modjet(&["repro", "--list"]));
    assert_eq!(v["details"].as_array().unwrap().len(), 9);
    let out = modjet(&["repro", "alpha-cancel"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["verdict"]["kind"], "pass");
}
