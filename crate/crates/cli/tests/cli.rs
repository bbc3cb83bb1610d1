use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rootseries"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_spec(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const LINEAR: &str = r#"{
  "base": {"alpha": {"r": 2, "theta": 0, "n": 0}, "coeffs": [[1, 0]]},
  "gammas": [0],
  "mode": "numeric",
  "max_order": 3,
  "a_values": [[0], [0.1], [-0.05], [0.5]],
  "radius": 0.25
}"#;

const TWOTERM: &str = r#"{
  "base": {"twoterm": {"b": -1, "beta": 2, "alpha": {"r": 1, "theta": 0, "n": 0}}},
  "gammas": [1],
  "mode": "exact",
  "max_order": 4,
  "a_values": [[0.001], [[0, 0.002]]]
}"#;

#[test]
fn linear_coefficients() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "lin.json", LINEAR);
    let out = run(&["coeff", "--spec", &spec]);
    assert!(out.status.success());
    let v = json(&out);
    let rows = v["coefficients"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["n"], serde_json::json!([1]));
    assert_eq!(rows[0]["value"], serde_json::json!([-1.0, 0.0]));
    for r in &rows[1..] {
        assert_eq!(r["value"], serde_json::json!([0.0, 0.0]));
    }

    let exact = json(&run(&["coeff", "--spec", &spec, "--mode", "exact"]));
    let values: Vec<&str> = exact["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["-1", "0", "0"]);
}

#[test]
fn twoterm_exact_coefficients() {
    // root of 1 - z^2 + a z: 1 + a/2 + a^2/8 + 0 a^3 - a^4/128
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "tt.json", TWOTERM);
    let v = json(&run(&["coeff", "--spec", &spec]));
    let values: Vec<&str> = v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["1/2", "1/8*alpha^-1", "0", "-1/128*alpha^-3"]);

    let num = json(&run(&["coeff", "--spec", &spec, "--mode", "numeric"]));
    let re: Vec<f64> = num["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"][0].as_f64().unwrap())
        .collect();
    for (got, want) in re.iter().zip([0.5, 0.125, 0.0, -1.0 / 128.0]) {
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
    }
}

#[test]
fn two_letters_at_order_one_give_two_rows() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        &dir,
        "d2.json",
        r#"{"base": {"alpha": {"r": 1, "theta": 0, "n": 0}, "coeffs": [[2, 0], [1, 0]]},
            "gammas": [1, "1/2"], "mode": "numeric", "max_order": 1}"#,
    );
    let v = json(&run(&["coeff", "--spec", &spec]));
    let rows = v["coefficients"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["n"], serde_json::json!([1, 0]));
    assert_eq!(rows[1]["n"], serde_json::json!([0, 1]));
    assert_eq!(rows[0]["value"], serde_json::json!([-0.5, 0.0]));
}

#[test]
fn invalid_specs_exit_with_validation_code() {
    let dir = TempDir::new().unwrap();
    let zero = write_spec(
        &dir,
        "zero.json",
        r#"{"base": {"alpha": {"r": 1, "theta": 0, "n": 0}, "coeffs": [[0, 0], [1, 0]]},
            "gammas": [1], "mode": "numeric", "max_order": 2}"#,
    );
    let out = run(&["coeff", "--spec", &zero]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("c1"));

    let unknown = write_spec(
        &dir,
        "unknown.json",
        r#"{"base": {"alpha": {"r": 1, "theta": 0, "n": 0}, "coeffs": [[1, 0]]},
            "gammas": [1], "mode": "numeric", "max_order": 2, "extra": 1}"#,
    );
    assert_eq!(run(&["coeff", "--spec", &unknown]).status.code(), Some(1));
    assert_eq!(
        run(&["coeff", "--spec", "/nonexistent/spec.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["verify", "bogus"]).status.code(), Some(1));
}

#[test]
fn eval_rows() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "lin.json", LINEAR);
    let out = run(&["eval", "--spec", &spec]);
    assert!(out.status.success());
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["series"], serde_json::json!([2.0, 0.0]));
    assert_eq!(rows[0]["newton"], serde_json::json!([2.0, 0.0]));
    assert_eq!(rows[0]["difference"], serde_json::json!(0.0));
    for r in &rows[..3] {
        assert_eq!(r["status"], "ok");
        assert!(r["difference"].as_f64().unwrap() < 1e-15);
    }
    assert_eq!(rows[3]["status"], "no-converge");
    assert!(rows[3].get("newton").is_none());
}

#[test]
fn eval_twoterm_agrees_to_fifth_order() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "tt.json", TWOTERM);
    let out = run(&["eval", "--spec", &spec, "--mode", "numeric"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for r in json(&out)["rows"].as_array().unwrap() {
        assert_eq!(r["status"], "ok");
        assert!(r["difference"].as_f64().unwrap() < 1e-13);
    }
    // exact mode has no evaluation
    assert_eq!(run(&["eval", "--spec", &spec]).status.code(), Some(1));
}

#[cfg_attr(not(feature = "mpfr"), ignore)]
#[test]
fn eval_at_high_precision() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "tt.json", TWOTERM);
    let out = run(&[
        "eval",
        "--spec",
        &spec,
        "--mode",
        "numeric",
        "--precision",
        "160",
        "--order",
        "4",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["precision"], 160);
    let d = v["rows"][0]["difference"].as_f64().unwrap();
    // truncation error ~ a^6 / 1024
    assert!(d > 0.0 && d < 1e-19, "{d}");
}

#[test]
fn verify_selectors() {
    let out = run(&["verify", "fprod", "--M", "4"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["identity"], "fprod");
    assert_eq!(v["passed"], true);
    assert_eq!(v["instances"].as_array().unwrap().len(), 10);
    assert!(v.get("counterexample").is_none());

    for sel in ["nu", "derivset", "newton", "vandermonde", "transform"] {
        let out = run(&["verify", sel]);
        assert!(out.status.success(), "{sel}");
        assert_eq!(json(&out)["passed"], true);
    }
    let out = run(&["verify", "theorem-main-consistency", "--order", "3"]);
    assert!(out.status.success());
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify", "all"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["identity"], "all");
    assert_eq!(v["passed"], true);
}

#[test]
fn integrality_with_spec() {
    let dir = TempDir::new().unwrap();
    let good = write_spec(
        &dir,
        "int.json",
        r#"{"base": {"symbolic": {"alpha": {"r": 1, "theta": 0, "n": 0}}},
            "gammas": [2, -1], "mode": "exact", "max_order": 4}"#,
    );
    let out = run(&["verify", "integrality", "--spec", &good]);
    assert!(out.status.success());
    assert_eq!(json(&out)["instances"].as_array().unwrap().len(), 14);

    let bad = write_spec(
        &dir,
        "frac.json",
        r#"{"base": {"symbolic": {"alpha": {"r": 1, "theta": 0, "n": 0}}},
            "gammas": ["1/2"], "mode": "exact", "max_order": 3}"#,
    );
    assert_eq!(
        run(&["verify", "integrality", "--spec", &bad])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn transform_with_spec() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "tt.json", TWOTERM);
    for beta2 in ["2", "1/3", "-1"] {
        let out = run(&["verify", "transform", "--spec", &spec, "--beta2", beta2]);
        assert!(
            out.status.success(),
            "beta2={beta2}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let lin = write_spec(&dir, "lin.json", LINEAR);
    assert_eq!(
        run(&["verify", "transform", "--spec", &lin]).status.code(),
        Some(1)
    );
}

#[test]
fn output_is_byte_stable_and_out_flag_writes_the_same_bytes() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "tt.json", TWOTERM);
    let a = run(&["coeff", "--spec", &spec]);
    let b = run(&["coeff", "--spec", &spec]);
    assert_eq!(a.stdout, b.stdout);

    let a = run(&["verify", "derivset", "--seed", "7"]);
    let b = run(&["verify", "derivset", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);

    let path = dir.path().join("out.json");
    let out = run(&[
        "verify",
        "derivset",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(Path::new(&path)).unwrap(), a.stdout);
}
