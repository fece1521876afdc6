// Copyright 2026 weakmeas Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn weakmeas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakmeas"))
        .args(args)
        .env("WEAKMEAS_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn bounds_spin_one() {
    let out = weakmeas(&["bounds", "--algebra", "su2:two_j=2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["delta_min"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["c_h"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["K"], 3);
    assert_eq!(v["d"], 3);
}

#[test]
fn bounds_spin_half_and_su2_fundamental_agree() {
    let a = json(&weakmeas(&["bounds", "--algebra", "su2:two_j=1"]));
    let b = json(&weakmeas(&["bounds", "--algebra", "suN:n=2"]));
    assert!((a["delta_min"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((a["c_h"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    for key in ["delta_min", "c_h", "c_adj", "lambda_mu", "lambda_lambda_mu"] {
        let (x, y) = (a[key].as_f64().unwrap(), b[key].as_f64().unwrap());
        assert!((x - y).abs() < 1e-12, "{key}: {x} vs {y}");
    }
    assert_eq!(a["positive_roots"].as_array().unwrap().len(), 1);
    assert_eq!(b["positive_roots"].as_array().unwrap().len(), 1);
}

#[test]
fn simulate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for (p, threads) in paths.iter().zip(["1", "4"]) {
        let status = Command::new(env!("CARGO_BIN_EXE_weakmeas"))
            .args(["simulate", "--algebra", "su2:two_j=3", "--time", "0.5", "--seed", "9"])
            .arg("--out")
            .arg(p)
            .env("WEAKMEAS_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = fs::read(&paths[0]).unwrap();
    assert_eq!(a, fs::read(&paths[1]).unwrap());

    let text = String::from_utf8(a).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header, "t,delta,purity,trace_m2,drift,x_1,x_2,x_3");
    assert_eq!(text.lines().count(), 52);
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 8);
        let (mantissa, _) = fields[1].split_once('e').unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
    }
}

#[test]
fn simulate_without_measurement_keeps_delta() {
    let out = weakmeas(&[
        "simulate", "--algebra", "su2:two_j=4", "--gamma", "0", "--time", "1", "--ham", "0.3,-0.2,0.7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let delta = column(&String::from_utf8(out.stdout).unwrap(), "delta");
    let d0 = delta[0];
    assert!(delta.iter().all(|d| (d - d0).abs() < 1e-6));
}

#[test]
fn ensemble_single_noiseless_trajectory() {
    let out = weakmeas(&["ensemble", "--gamma", "0", "--traj", "1", "--time", "0.5", "--ham", "0.1,0.2,-0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["max_distance"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["passed"], true);
}

#[test]
fn ensemble_bound_violation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("dist.csv");
    let out = weakmeas(&[
        "ensemble", "--traj", "4", "--time", "0.5", "--bound", "1e-6", "--out", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["passed"], false);
    let text = fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,distance");
    assert_eq!(text.lines().count(), 52);
}

#[test]
fn theorem_scan_reports_gcs_value() {
    let out = weakmeas(&["theorem-scan", "--algebra", "su2:two_j=3", "--samples", "500"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["gcs_value"].as_f64().unwrap() - 4.5).abs() < 1e-10);
    assert!(v["min_trace_m2"].as_f64().unwrap() >= 4.5 - 1e-9);
    assert!(v["max_drift"].as_f64().unwrap() <= 1e-9);
    assert!(v["violation"].is_null());
}

#[test]
fn theorem_scan_rejects_bad_tolerance_and_gamma() {
    let out = weakmeas(&["theorem-scan", "--algebra", "su2:two_j=1", "--samples", "10", "--tol", "-1"]);
    assert_eq!(out.status.code(), Some(1));

    let out = weakmeas(&["theorem-scan", "--algebra", "su2:two_j=2", "--samples", "50", "--gamma", "-0.1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "algebra = \"su2:two_j=2\"\nsamples = 20\nseed = 3\n").unwrap();
    let from_file = json(&weakmeas(&["theorem-scan", "--config", cfg.to_str().unwrap()]));
    assert_eq!(from_file["samples"], 20);
    assert_eq!(from_file["algebra"], "su2:two_j=2");
    let flagged = json(&weakmeas(&[
        "theorem-scan", "--config", cfg.to_str().unwrap(), "--algebra", "suN:n=3",
    ]));
    assert_eq!(flagged["algebra"], "suN:n=3");
    assert_eq!(flagged["samples"], 20);
}

#[test]
fn usage_and_config_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &["frobnicate"],
        &["simulate", "--gamma", "abc"],
        &["bounds", "--algebra", "so5:n=3"],
        &["simulate", "--gamma", "1", "--dt", "0.1"],
        &["simulate", "--time", "1.0005"],
        &["simulate", "--ham", "1,2"],
        &["simulate", "--config", "/nonexistent/weakmeas.toml"],
    ];
    for args in cases {
        let out = weakmeas(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_weakmeas"))
        .args(["bounds"])
        .env("WEAKMEAS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
