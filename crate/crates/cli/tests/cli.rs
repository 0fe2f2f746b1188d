use std::process::{Command, Output};

use darboux_core::darboux::r_coeffs;
use darboux_core::families::{closed_potential, preset};
use darboux_core::{BiPoly, RatFn};
use serde_json::Value;

fn darboux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_darboux")).args(args).output().expect("binary runs")
}

fn darboux_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_darboux"))
        .args(args)
        .env(key, val)
        .output()
        .expect("binary runs")
}

fn json(out: &[u8]) -> Value {
    serde_json::from_slice(out).expect("valid JSON")
}

fn ratfn(v: &Value) -> RatFn {
    let num: BiPoly = v["num"].as_str().unwrap().parse().unwrap();
    let den: BiPoly = v["den"].as_str().unwrap().parse().unwrap();
    RatFn::new(num, den).unwrap()
}

fn stderr_error(out: &Output) -> Value {
    let line = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(line.trim()).expect("stderr carries one JSON object")
}

#[test]
fn build_b0_prints_b_and_u() {
    let out = darboux(&["build", "--family", "b0", "--params", r#"{"p0":"1","q0":"0","x0":"0","y0":"0","C":"1"}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["B"]["num"], "x");
    assert_eq!(v["B"]["den"], "(x^2 + y^2 + 1)");
    assert_eq!(v["u"]["num"], "-8");
    assert_eq!(v["u"]["den"], "(x^2 + y^2 + 1)^2");
}

#[test]
fn build_reports_constants_for_b2() {
    let out = darboux(&["build", "--family", "b2", "--params", r#"{"x1":"1","y1":"2","x2":"-3","y2":"1/2"}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    let k: Vec<&str> = v["constants"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(k, ["k1", "k2", "k3", "k4", "k5", "k6"]);
    // k1 = x1 + x2, k6 = y1·x2
    assert_eq!(v["constants"]["k1"], "-2");
    assert_eq!(v["constants"]["k6"], "-6");
}

#[test]
fn build_tanh_prints_formula() {
    let out = darboux(&["build", "--family", "tanh", "--params", r#"{"C1":"1","C2":"0"}"#]);
    assert_eq!(out.status.code(), Some(0));
    let f = json(&out.stdout)["formula"].as_str().unwrap().to_string();
    assert!(f.contains("tanh((x*y - 0)/1)") && f.contains("cosh"), "{f}");
}

#[test]
fn invalid_params_exit_2_with_json_error() {
    for args in [
        vec!["build", "--family", "b1", "--params", r#"{"x0":"1","y0":"2","x1":"1","y1":"2"}"#],
        vec!["build", "--family", "b0", "--params", r#"{"C":"-1"}"#],
        vec!["build", "--family", "b0", "--params", r#"{"bogus":"1"}"#],
        vec!["build", "--family", "b0", "--params", "/nonexistent/params.json"],
        vec!["build", "--family", "b7"],
        vec!["frobnicate"],
        vec!["verify", "--targets", "eq12:b9"],
    ] {
        let out = darboux(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr_error(&out)["error"].is_string(), "{args:?}");
    }
}

#[test]
fn help_exits_0() {
    assert_eq!(darboux(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_b0_is_deterministic_and_passes() {
    let a = darboux(&["verify", "--family", "b0", "--seed", "7"]);
    let b = darboux(&["verify", "--family", "b0", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let reports = json(&a.stdout);
    let reports = reports.as_array().unwrap();
    assert!(!reports.is_empty());
    for r in reports {
        assert_eq!(r["verdict"], "pass", "{r}");
        assert_eq!(r["seed"], 7);
        let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(&keys[..5], ["check", "mode", "verdict", "max_residual", "residual_terms"]);
    }
}

#[test]
fn verify_single_target() {
    let out = darboux(&["verify", "--targets", "eq12:B0", "--seed", "1", "--draws", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out.stdout);
    assert_eq!(r.as_array().unwrap().len(), 3);
    assert_eq!(r[0]["mode"], "exact");
    assert_eq!(r[0]["residual_terms"], 0);
    assert!(r[0]["max_residual"].is_null());
}

#[test]
fn verification_failure_exits_1() {
    // Three simple poles with arbitrary weights: N is not harmonic, so B
    // does not solve the system.
    let params = r#"{"poles":[["0","0"],["1","0"],["0","1"]],"weights":[["1","0"],["1","0"],["1","0"]],"C":"1"}"#;
    let out = darboux(&["verify", "--family", "custom", "--params", params]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out.stdout);
    assert!(r.as_array().unwrap().iter().any(|r| r["verdict"] == "fail"));
}

#[test]
fn exponent_cap_overflow_exits_2() {
    let out = darboux_env(&["verify", "--targets", "eq12:b1", "--draws", "1"], "DARBOUX_EXP_CAP", "3");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["error"], "exponent_cap_exceeded");
    let out = darboux_env(&["verify", "--targets", "eq12:b0"], "DARBOUX_EXP_CAP", "many");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_const_seed_gives_r2() {
    let out = darboux(&["transform", "--family", "b0", "--seed-kind", "const"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["check"]["verdict"], "pass");
    let b = RatFn::new("x".parse().unwrap(), "x^2 + y^2 + 1".parse().unwrap()).unwrap();
    let (_, r2) = r_coeffs(&b).unwrap();
    assert!(ratfn(&v["Y_tilde"]).sub(&r2).unwrap().is_zero());
}

#[test]
fn transform_degree_two_seed() {
    let out = darboux(&["transform", "--family", "b1", "--seed-kind", "re", "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["seed"]["Y"], "x^2 - y^2");
    assert_eq!(v["seed"]["Q"], "2*x*y");
    assert_eq!(v["check"]["verdict"], "pass");

    let out = darboux(&["transform", "--family", "b1", "--seed-kind", "im", "--degree", "2"]);
    let v = json(&out.stdout);
    assert_eq!(v["seed"]["Y"], "2*x*y");
    assert_eq!(v["seed"]["Q"], "-x^2 + y^2");
}

#[test]
fn transform_rejects_bad_seed_spec() {
    let out = darboux(&["transform", "--family", "b0", "--seed-kind", "re", "--degree", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = darboux(&["transform", "--family", "tanh", "--seed-kind", "const"]);
    assert_eq!(out.status.code(), Some(2));
}

fn csv_rows(text: &str) -> Vec<(f64, f64, Option<f64>)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,value"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let v = if f[2].is_empty() { None } else { Some(f[2].parse().unwrap()) };
            (f[0].parse().unwrap(), f[1].parse().unwrap(), v)
        })
        .collect()
}

#[test]
fn grid_b0_center_row() {
    let out = darboux(&["grid", "--family", "b0", "--params", r#"{"C":"1"}"#, "--x", "-2:2:5", "--y", "0:0:1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[2], (0.0, 0.0, Some(-8.0)));
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(summary["rows"], 5);
    assert_eq!(summary["non_finite"], 0);
}

#[test]
fn grid_preset_single_point() {
    let out = darboux(&["grid", "--family", "tsarev-1", "--x", "0:0:1", "--y", "0:0:1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert!((v[0][2].as_f64().unwrap() + 0.2).abs() < 1e-15);
}

#[test]
fn grid_rejects_single_sample_on_open_range() {
    let out = darboux(&["grid", "--family", "b0", "--x", "0:1:1", "--y", "0:0:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["error"], "usage");
}

#[test]
fn grid_csv_round_trips_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.csv");
    let out = darboux(&[
        "grid", "--family", "tsarev-1", "--x", "-3:3:31", "--y", "-2.5:1.5:17", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let u = closed_potential(&preset("tsarev-1").unwrap()).unwrap().rational().unwrap().compile();
    let rows = csv_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 31 * 17);
    // y is the outer loop.
    assert_eq!((rows[0].1, rows[1].1, rows[31].1), (-2.5, -2.5, -2.25));
    for (x, y, v) in rows {
        assert_eq!(v.unwrap().to_bits(), u.eval(x, y).to_bits(), "({x}, {y})");
    }
}
