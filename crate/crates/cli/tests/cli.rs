use std::process::{Command, Output};

use serde_json::Value;

fn pryce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pryce"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn verify_poincare_json_schema() {
    let out = pryce(&["verify", "poincare", "--lambda", "1", "--samples", "100", "--seed", "42", "--tol", "1e-9"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["suite"], "poincare");
    assert_eq!(v["passed"], true);
    assert!(v["version"].is_string());
    assert_eq!(v["config"]["lambda"], 1.0);
    assert_eq!(v["config"]["seed"], 42);
    let records = v["records"].as_array().unwrap();
    assert!(records.len() >= 21);
    for r in records {
        assert!(r["id"].is_string());
        assert!(r["max_residual"].as_f64().unwrap() < 1e-9);
        assert_eq!(r["samples"], 100);
        assert_eq!(r["passed"], true);
    }
    assert!(v["timestamp"].is_u64());
}

#[test]
fn gauge_with_half_integer_lambda_is_a_usage_error() {
    let out = pryce(&["verify", "gauge", "--lambda", "0.5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("integer"));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = pryce(&["verify", "everything"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("poincare"));
}

#[test]
fn invalid_config_is_a_usage_error() {
    assert_eq!(code(&pryce(&["verify", "su2", "--samples", "0"])), 2);
    assert_eq!(code(&pryce(&["verify", "su2", "--tol=-1"])), 2);
    assert_eq!(code(&pryce(&["verify", "ccwz", "--steps", "0"])), 2);
}

#[test]
fn all_suites_pass_without_helicity() {
    let out = pryce(&["verify", "all", "--lambda", "0", "--samples", "20", "--steps", "2000"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn all_skips_gauge_for_half_integer_lambda() {
    let out = pryce(&["verify", "all", "--lambda=-0.5", "--samples", "10", "--steps", "1000"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let notes: Vec<&str> = v["notes"].as_array().unwrap().iter().map(|n| n.as_str().unwrap()).collect();
    assert!(notes.iter().any(|n| n.contains("gauge suite skipped")));
    assert!(v["records"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| !r["id"].as_str().unwrap().starts_with("gauge/")));
}

#[test]
fn failing_identity_exits_one() {
    let out = pryce(&["verify", "ccwz", "--samples", "5", "--steps", "100"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn reports_are_deterministic_without_timestamp() {
    let args = ["verify", "residuals", "--lambda", "2", "--samples", "30", "--no-timestamp"];
    let a = pryce(&args);
    let b = pryce(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a).get("timestamp").is_none());
}

#[test]
fn csv_flattens_records() {
    let out = pryce(&["verify", "su2", "--samples", "20", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[1], "id");
    assert_eq!(&headers[2], "max_residual");
    let rows: Vec<_> = reader.records().map(|r| r.unwrap()).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| &r[0] == "su2" && &r[4] == "true"));
}

#[test]
fn text_format_has_summary() {
    let out = pryce(&["verify", "residuals", "--format", "text", "--samples", "10"]);
    assert_eq!(code(&out), 0);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().last().unwrap().starts_with("PASSED"));
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("pryce-cli-test-{}.json", std::process::id()));
    let out = pryce(&["verify", "su2", "--samples", "10", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "su2");
    let _ = std::fs::remove_file(path);
}

#[test]
fn rotate_by_zero_echoes_input() {
    let out = pryce(&["rotate", "--axis", "1", "--angle", "0", "--p", "0.3,-0.2,0.9", "--x", "1,-2,3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["closed_form"], v["input"]);
    assert_eq!(v["rk4"], v["input"]);
    assert_eq!(v["max_difference"], 0.0);
}

#[test]
fn rotate_from_pole_matches_closed_form() {
    let out = pryce(&["rotate", "--angle", "0.5", "--p", "0,0,1", "--x", "0,0,0", "--lambda", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["max_difference"].as_f64().unwrap() < 1e-8);
    let x1 = v["closed_form"]["x"][0].as_f64().unwrap();
    assert!(x1 > 0.0);
}

#[test]
fn rotate_negative_angle_and_csv() {
    let out = pryce(&["rotate", "--angle", "-0.3", "--p", "0.2,0.1,1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let s = String::from_utf8(out.stdout).unwrap();
    assert_eq!(s.lines().count(), 5);
    assert!(s.lines().nth(4).unwrap().starts_with("difference,"));
}

#[test]
fn rotate_near_south_pole_is_singular() {
    let out = pryce(&["rotate", "--angle", "0.1", "--p", "0,0,-1"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn rotate_other_axis_is_a_usage_error() {
    assert_eq!(code(&pryce(&["rotate", "--axis", "2", "--angle", "0.1", "--p", "0,0,1"])), 2);
}

#[test]
fn standard_coords_at_stability_point() {
    let out = pryce(&["standard-coords", "--p", "0,0,1", "--x", "1,2,3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let vec = |key: &str| -> Vec<f64> { v[key].as_array().unwrap().iter().map(|c| c.as_f64().unwrap()).collect() };
    assert_eq!(vec("xi"), vec![0.0, 0.0]);
    assert_eq!(vec("psi_numeric"), vec![1.0, 2.0, 3.0]);
    assert_eq!(vec("y"), vec![1.0, 2.0, 3.0]);
}

#[test]
fn standard_coords_linearized_example() {
    let out = pryce(&["standard-coords", "--p", "0,1,0", "--x", "0,0,0", "--lambda", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let y: Vec<f64> = v["y"].as_array().unwrap().iter().map(|c| c.as_f64().unwrap()).collect();
    assert!((y[0] - 1.0).abs() < 1e-8 && y[1].abs() < 1e-8 && y[2].abs() < 1e-8);
    assert!(v["residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn standard_coords_outside_chart() {
    let out = pryce(&["standard-coords", "--p", "0,0,-1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn malformed_vector_is_a_usage_error() {
    assert_eq!(code(&pryce(&["standard-coords", "--p", "1,2"])), 2);
}
