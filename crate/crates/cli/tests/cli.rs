use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gconc::states::{isotropic_state, max_entangled};
use serde_json::Value;
use tempfile::TempDir;

fn gconc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gconc"))
        .args(args)
        .env("GCONC_OUT_DIR", dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write_state<T: serde::Serialize>(dir: &Path, name: &str, state: &T) -> String {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(state).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn trajectory_d5() {
    let tmp = TempDir::new().unwrap();
    let out = gconc(tmp.path(), &["trajectory", "--d", "5", "--gamma", "1", "--t-max", "0.35", "--steps", "200"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(tmp.path().join("trajectory_d5.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,F,concurrence,schmidt_number,g_positive");
    assert_eq!(lines[1], "0,1,1,5,true");
    assert_eq!(lines.len(), 201);
    assert!(lines[200].starts_with("0.35,"));
    assert!(lines[200].ends_with(",false"));

    let markers = read_json(&tmp.path().join("trajectory_d5.markers.json"));
    assert!((markers["t_2"].as_f64().unwrap() - 0.1791759).abs() < 1e-7);
    assert!((markers["t_5"].as_f64().unwrap() - 0.0233614).abs() < 1e-7);
    assert!((markers["rate_ratio"].as_f64().unwrap() - 3.56712).abs() < 1e-5);
}

#[test]
fn trajectory_ck_columns_and_json_format() {
    let tmp = TempDir::new().unwrap();
    let roof = ["--restarts", "2", "--max-iters", "2000", "--warmup-iters", "2000"];
    let args = [&["trajectory", "--d", "3", "--t-max", "0.2", "--steps", "3", "--ck-roofs"][..], &roof].concat();
    assert_eq!(code(&gconc(tmp.path(), &args)), 0);
    let csv = fs::read_to_string(tmp.path().join("trajectory_d3.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,F,concurrence,schmidt_number,g_positive,c_2,c_3");
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 7));

    let out = tmp.path().join("sub/traj.json");
    let args = ["trajectory", "--d", "4", "--t-max", "0.1", "--steps", "5", "--format", "json", "--out", out.to_str().unwrap()];
    assert_eq!(code(&gconc(tmp.path(), &args)), 0);
    let records = read_json(&out);
    assert_eq!(records.as_array().unwrap().len(), 5);
    assert_eq!(records[0]["F"], Value::from(1.0));
    assert!(tmp.path().join("sub/traj.markers.json").exists());
}

#[test]
fn rates_table() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&gconc(tmp.path(), &["rates", "--d-min", "2", "--d-max", "1000"])), 0);
    let csv = fs::read_to_string(tmp.path().join("rates.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "d,t_2,t_d,ratio,ratio_over_d");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 999);
    let row = |d: usize| rows.iter().find(|r| r[0] == d as f64).unwrap();
    assert!((row(2)[3] - 0.606826).abs() < 1e-6);
    assert!((row(5)[3] - 3.56712).abs() < 1e-5);
    assert!((0.99..=1.0).contains(&row(1000)[4]));
    assert_eq!(row(2)[1], row(2)[2]);
}

#[test]
fn rates_rejects_bad_range() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&gconc(tmp.path(), &["rates", "--d-min", "1", "--d-max", "4"])), 2);
    assert_eq!(code(&gconc(tmp.path(), &["rates", "--d-min", "5", "--d-max", "4"])), 2);
    assert!(fs::read_dir(tmp.path()).unwrap().next().is_none());
}

#[test]
fn verify_factorization_d2() {
    let tmp = TempDir::new().unwrap();
    let out = gconc(tmp.path(), &["verify", "--law", "factorization", "--d", "2", "--samples", "100", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let s = read_json(&tmp.path().join("verify_factorization_d2.json"));
    assert_eq!(s["method"], "wootters");
    assert_eq!(s["seed"], 7);
    assert_eq!(s["failures"], 0);
    assert!(s["max_abs_error"].as_f64().unwrap() <= 1e-9);
    assert_eq!(s["records"].as_array().unwrap().len(), 100);
}

#[test]
fn verify_ck_reports_slacks() {
    let tmp = TempDir::new().unwrap();
    let args = ["verify", "--law", "ck", "--d", "3", "--k", "2", "--samples", "3", "--seed", "7", "--restarts", "4"];
    assert_eq!(code(&gconc(tmp.path(), &args)), 0);
    let s = read_json(&tmp.path().join("verify_ck_d3.json"));
    assert_eq!(s["method"], "roof");
    assert_eq!(s["params"]["restarts"], 4);
    for r in s["records"].as_array().unwrap() {
        assert!(r["slack"].as_f64().unwrap() >= -5e-3);
    }
}

#[test]
fn verify_invalid_d_is_usage_error_without_output() {
    let tmp = TempDir::new().unwrap();
    let out = gconc(tmp.path(), &["verify", "--law", "factorization", "--d", "1", "--samples", "5"]);
    assert_eq!(code(&out), 2);
    assert!(fs::read_dir(tmp.path()).unwrap().next().is_none());
    assert_eq!(code(&gconc(tmp.path(), &["verify", "--law", "ck", "--d", "3"])), 2);
    assert_eq!(code(&gconc(tmp.path(), &["verify", "--law", "factorization", "--d", "2", "--method", "nope"])), 2);
    assert_eq!(code(&gconc(tmp.path(), &["verify", "--law", "nope", "--d", "2"])), 2);
}

#[test]
fn verify_failure_exits_one_and_still_writes() {
    let tmp = TempDir::new().unwrap();
    let args = [
        "verify", "--law", "factorization", "--d", "3", "--samples", "1", "--n-kraus", "4", "--method", "roof",
        "--restarts", "1", "--max-iters", "5", "--warmup-iters", "5", "--tolerance", "1e-15",
    ];
    assert_eq!(code(&gconc(tmp.path(), &args)), 1);
    let s = read_json(&tmp.path().join("verify_factorization_d3.json"));
    assert_eq!(s["failures"], 1);
}

#[test]
fn roof_examples() {
    let tmp = TempDir::new().unwrap();
    let cases = [
        (write_state(tmp.path(), "phi.json", &max_entangled(3).unwrap().density()), 1.0, 1e-9),
        (write_state(tmp.path(), "phi_pure.json", &max_entangled(3).unwrap()), 1.0, 1e-9),
        (write_state(tmp.path(), "iso2.json", &isotropic_state(2, 0.625).unwrap()), 0.25, 1e-3),
    ];
    for (input, want, tol) in cases {
        let out = tmp.path().join("roof.json");
        assert_eq!(code(&gconc(tmp.path(), &["roof", "--input", &input, "--seed", "5"])), 0);
        let est = read_json(&out);
        assert!((est["value"].as_f64().unwrap() - want).abs() <= tol, "{input}");
        assert_eq!(est["seed"], 5);
        for key in ["ensemble_size", "restarts", "iterations", "converged", "residual", "decomposition"] {
            assert!(est.get(key).is_some(), "{key}");
        }
    }
    let input = write_state(tmp.path(), "iso3.json", &isotropic_state(3, 0.6).unwrap());
    let out = tmp.path().join("iso3_roof.json");
    assert_eq!(code(&gconc(tmp.path(), &["roof", "--input", &input, "--out", out.to_str().unwrap()])), 0);
    assert!(read_json(&out)["value"].as_f64().unwrap() <= 0.02);
}

#[test]
fn roof_measure_flags() {
    let tmp = TempDir::new().unwrap();
    let input = write_state(tmp.path(), "phi.json", &max_entangled(3).unwrap().density());
    let out = gconc(tmp.path(), &["roof", "--input", &input, "--measure", "ck", "--k", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(read_json(&tmp.path().join("roof.json"))["measure"], serde_json::json!({"Ck": 2}));
    assert_eq!(code(&gconc(tmp.path(), &["roof", "--input", &input, "--measure", "ck"])), 2);
    assert_eq!(code(&gconc(tmp.path(), &["roof", "--input", &input, "--k", "2"])), 2);
    assert_eq!(code(&gconc(tmp.path(), &["roof", "--input", &input, "--measure", "ck", "--k", "4"])), 2);
}

#[test]
fn roof_input_errors() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{\"d\": 2, ").unwrap();
    assert_eq!(code(&gconc(tmp.path(), &["roof", "--input", bad.to_str().unwrap()])), 2);
    fs::write(&bad, r#"{"d":2,"f":2,"matrix":[[[1,0]]]}"#).unwrap();
    assert_eq!(code(&gconc(tmp.path(), &["roof", "--input", bad.to_str().unwrap()])), 2);
    let missing = tmp.path().join("missing.json");
    assert_eq!(code(&gconc(tmp.path(), &["roof", "--input", missing.to_str().unwrap()])), 3);
    assert!(!tmp.path().join("roof.json").exists());
}

#[test]
fn unwritable_output_is_io_error() {
    let tmp = TempDir::new().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("rates.csv");
    assert_eq!(code(&gconc(tmp.path(), &["rates", "--out", out.to_str().unwrap()])), 3);
}

#[test]
fn usage_errors_from_argument_parsing() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&gconc(tmp.path(), &["bogus"])), 2);
    assert_eq!(code(&gconc(tmp.path(), &["trajectory", "--d", "5"])), 2);
    assert_eq!(code(&gconc(tmp.path(), &["trajectory", "--d", "5", "--t-max", "-1"])), 2);
    assert_eq!(code(&gconc(tmp.path(), &["trajectory", "--d", "five", "--t-max", "1"])), 2);
    assert_eq!(code(&gconc(tmp.path(), &["--help"])), 0);
}

#[test]
fn reruns_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = ["verify", "--law", "two-sided", "--d", "2", "--samples", "20", "--seed", "3"];
    for dir in [&a, &b] {
        assert_eq!(code(&gconc(dir.path(), &args)), 0);
    }
    let name = "verify_two-sided_d2.json";
    assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
    assert_eq!(code(&gconc(b.path(), &[&args[..7], &["--seed", "4"]].concat())), 0);
    assert_ne!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
}
