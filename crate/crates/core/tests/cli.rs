//! Command-line behaviour: reports, formats, exit codes and reproducibility.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn qcompare(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcompare")).args(args).env_remove("QCOMPARE_SEED").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn ensemble_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn num(v: &Value, path: &[&str]) -> f64 {
    path.iter().fold(v, |v, k| &v[*k]).as_f64().unwrap_or_else(|| panic!("no number at {path:?} in {v}"))
}

#[test]
fn table1_three() {
    let v = json(&qcompare(&["table1", "--n", "3"]));
    assert!((num(&v, &["p_no"]) - 2.0 / 3.0).abs() < 1e-11);
    assert!((num(&v, &["p_disc"]) - 2.0 / 3.0).abs() < 1e-11);
    assert_eq!(num(&v, &["p_opt"]), 0.75);
    assert_eq!(v["ordering"], "no = disc < opt");
    assert_eq!(v["input"]["n"], 3);
}

#[test]
fn table1_csv_lists_each_n() {
    let out = qcompare(&["table1", "--n", "5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,p_no,p_disc,p_opt,ordering"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("5,0.8,"), "{row}");
    assert!(row.ends_with("disc < no = opt"), "{row}");
}

#[test]
fn fig1_plateau() {
    let out = qcompare(&["fig1", "--overlap", "0.8", "--points", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,p_opt,p_disc,m_c"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 200);
    assert_eq!(&rows[0][..3], &[0.0, 0.2, 0.04]);
    let plateau: Vec<_> = rows.iter().filter(|r| r[0] >= 0.32).collect();
    assert!(!plateau.is_empty());
    for r in plateau {
        assert_eq!((r[1], r[2], r[3]), (0.68, 0.68, 0.32));
    }
    for r in rows.iter().filter(|r| r[0] < 0.32) {
        assert!(r[1] > r[2], "{r:?}");
    }
}

#[test]
fn compare_orthogonal_file() {
    let f = ensemble_file(r#"{"states": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "priors": [0.5, 0.5]}"#);
    let v = json(&qcompare(&["compare", "--ensemble", f.path().to_str().unwrap()]));
    assert_eq!(num(&v, &["optimal", "p_success"]), 1.0);
    assert_eq!(v["input"]["priors"], serde_json::json!([0.5, 0.5]));
    assert_eq!(v["input"]["states"][1][1], serde_json::json!([1.0, 0.0]));
}

#[test]
fn compare_accepts_densities_and_default_priors() {
    let f = ensemble_file(r#"{"states": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]], [[0.6, 0], [0.8, 0]]]}"#);
    let v = json(&qcompare(&["compare", "--ensemble", f.path().to_str().unwrap()]));
    // s² = 0.36 → 1 − s²/2 = 0.82
    assert!((num(&v, &["optimal", "p_success"]) - 0.82).abs() < 1e-11, "{v}");
}

#[test]
fn compare_inline_sources() {
    let v = json(&qcompare(&["compare", "--overlap", "0.8"]));
    assert_eq!(num(&v, &["optimal", "p_success"]), 0.68);
    let v = json(&qcompare(&["compare", "--phase-states", "4"]));
    assert_eq!(num(&v, &["optimal", "p_success"]), 0.75);
    assert_eq!(v["ordering"], "disc < no = opt");
}

#[test]
fn malformed_json_is_a_parse_error_with_line() {
    let f = ensemble_file("{\n  \"states\": [\n    [[1, 0], [0, 0]],\n  ]\n}\n");
    let out = qcompare(&["compare", "--ensemble", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line"), "{err}");
}

#[test]
fn missing_file_is_a_parse_error() {
    let out = qcompare(&["compare", "--ensemble", "/nonexistent/ensemble.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invariant_violations_are_domain_errors() {
    let f = ensemble_file(r#"{"states": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}"#);
    let out = qcompare(&["compare", "--ensemble", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("norm"), "{err}");

    let f = ensemble_file(r#"{"states": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "priors": [0.7, 0.7]}"#);
    let out = qcompare(&["compare", "--ensemble", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("prior"));

    assert_eq!(qcompare(&["margin", "--overlap", "1.5", "--margin", "0.1"]).status.code(), Some(2));
    assert_eq!(qcompare(&["table1", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn bad_flags_are_parse_errors() {
    assert_eq!(qcompare(&["table1", "--n", "three"]).status.code(), Some(3));
    assert_eq!(qcompare(&["frobnicate"]).status.code(), Some(3));
    // exactly one state source
    assert_eq!(qcompare(&["compare", "--overlap", "0.5", "--phase-states", "3"]).status.code(), Some(3));
    assert_eq!(qcompare(&["compare"]).status.code(), Some(3));
    assert_eq!(qcompare(&["--help"]).status.code(), Some(0));
}

#[test]
fn margin_report() {
    let v = json(&qcompare(&["margin", "--overlap", "0.8", "--margin", "0"]));
    assert_eq!(num(&v, &["optimal", "p_success"]), 0.2);
    assert_eq!(num(&v, &["discrimination", "p_success"]), 0.04);
    assert_eq!(num(&v, &["m_c"]), 0.32);
    assert_eq!(v["input"]["margin"], 0.0);

    let v = json(&qcompare(&["margin", "--overlap", "0.8", "--margin", "0.1", "--povm"]));
    let p = num(&v, &["optimal", "p_success"]);
    assert!(v.to_string().contains("povm"), "{v}");
    assert!((p - (0.5 + 0.5 * (0.2f64.sqrt() + 1.0) * (0.2f64.sqrt() + 1.0 - 1.6))).abs() < 1e-11);
}

#[test]
fn discriminate_and_sufficiency_reports() {
    let v = json(&qcompare(&["discriminate", "--overlap", "0.8", "--margin", "0.05"]));
    assert!((num(&v, &["result", "q_success"]) - 0.45).abs() < 1e-11);
    let v = json(&qcompare(&["discriminate", "--phase-states", "5"]));
    assert!(v.to_string().contains("0.4"), "{v}");

    let v = json(&qcompare(&["sufficiency", "--phase-states", "3"]));
    assert_eq!(v["sufficient"], false);
    let v = json(&qcompare(&["sufficiency", "--phase-states", "6"]));
    assert_eq!(v["sufficient"], true);
}

#[test]
fn simulate_is_reproducible() {
    let args = ["simulate", "--phase-states", "3", "--strategy", "no-measurement", "--trials", "20000", "--seed", "11"];
    let a = qcompare(&args);
    let b = qcompare(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let from_env = Command::new(env!("CARGO_BIN_EXE_qcompare"))
        .args(&args[..args.len() - 2])
        .env("QCOMPARE_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(a.stdout, from_env.stdout);

    let other = qcompare(&[
        "simulate",
        "--phase-states",
        "3",
        "--strategy",
        "no-measurement",
        "--trials",
        "20000",
        "--seed",
        "12",
    ]);
    assert_ne!(a.stdout, other.stdout);

    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["input"]["seed"], 11);
    let p = num(&v, &["report", "p_success_hat"]);
    let se = num(&v, &["report", "stderr"]);
    assert!((p - 2.0 / 3.0).abs() <= 4.0 * se);
}

#[test]
fn csv_is_flat_key_value() {
    let out = qcompare(&["margin", "--overlap", "0.8", "--margin", "0.5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.lines().any(|l| l == "optimal.p_success,0.68"), "{text}");
}

#[test]
fn library_entry_point_matches_binary() {
    let lib = qcompare::cli::run_from_args(["qcompare", "table1", "--n", "4"]);
    let bin = qcompare(&["table1", "--n", "4"]);
    assert_eq!(lib.status, 0);
    assert_eq!(lib.stdout.as_bytes(), bin.stdout.as_slice());
}
