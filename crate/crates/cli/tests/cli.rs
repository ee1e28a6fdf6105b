//! End-to-end checks of the binary: output schemas, determinism, exit
//! codes, and the certificate round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

use approx::assert_abs_diff_eq;

fn boxbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn scratch(name: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("boxbound-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_file(&path);
    path
}

#[test]
fn bound_csv_matches_schema_and_closed_form() {
    let output = boxbound(&[
        "bound", "--poly", "x1", "--d-min", "1", "--d-max", "3", "--timing", "zero",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d,hierarchy,value,gap,wall_time_ms");
    assert_eq!(lines.len(), 4);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "1");
    assert_eq!(fields[1], "lasserre");
    let value: f64 = fields[2].parse().unwrap();
    assert_abs_diff_eq!(value, -(0.5f64).sqrt(), epsilon = 1e-12);
    assert_eq!(fields[3], "", "gap column stays empty without a reference");
    assert_eq!(fields[4], "0.000");
}

#[test]
fn zero_timing_makes_runs_byte_identical() {
    let args = [
        "compare",
        "--poly",
        "x1^2 + x1*x2",
        "--d-min",
        "1",
        "--d-max",
        "4",
        "--timing",
        "zero",
    ];
    let first = boxbound(&args);
    let second = boxbound(&args);
    assert!(first.status.success() && second.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    for name in ["lasserre", "dkhl", "grid-lobatto", "grid-regular"] {
        assert!(text.contains(name), "{name} missing from comparison");
    }
}

#[test]
fn dkhl_json_reports_minimizing_subsets() {
    let output = boxbound(&[
        "dkhl", "--poly", "x1", "--d-min", "1", "--d-max", "4", "--format", "json", "--timing",
        "zero",
    ]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for (index, row) in rows.iter().enumerate() {
        let d = (index + 1) as f64;
        let expected = -(std::f64::consts::PI / (2.0 * d + 2.0)).cos();
        assert_abs_diff_eq!(row["value"].as_f64().unwrap(), expected, epsilon = 1e-10);
        assert!(row["minimizing_subset"].is_array());
    }
}

#[test]
fn rate_json_reports_a_quadratic_slope() {
    let output = boxbound(&[
        "rate",
        "--poly",
        "x1^2 + x1",
        "--d-min",
        "5",
        "--d-max",
        "30",
        "--format",
        "json",
        "--timing",
        "zero",
    ]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_abs_diff_eq!(report["reference"].as_f64().unwrap(), -0.25, epsilon = 1e-9);
    let slope = report["slope"].as_f64().unwrap();
    assert!((-2.3..=-1.5).contains(&slope), "slope {slope}");
    let rows = report["rows"].as_array().unwrap();
    assert!(rows.iter().all(|row| row["gap"].as_f64().unwrap() > 0.0));
}

#[test]
fn roots_csv_lists_all_roots() {
    let output = boxbound(&[
        "roots",
        "--alpha=-0.5",
        "--beta=-0.5",
        "--k",
        "4",
        "--format",
        "csv",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,root");
    assert_eq!(lines.len(), 5);
    let smallest: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert_abs_diff_eq!(
        smallest,
        -(std::f64::consts::PI / 8.0).cos(),
        epsilon = 1e-12
    );
}

#[test]
fn certify_round_trip_passes_and_tampering_fails() {
    let path = scratch("roundtrip.json");
    let path_text = path.to_str().unwrap();
    let output = boxbound(&[
        "bound",
        "--poly",
        "x1^2 + x1",
        "--d-min",
        "1",
        "--d-max",
        "3",
        "--cert-out",
        path_text,
        "--timing",
        "zero",
    ]);
    assert!(output.status.success());

    let verify = boxbound(&["certify", "--certificate", path_text, "--poly", "x1^2 + x1"]);
    assert!(verify.status.success());
    assert!(stdout(&verify).contains("PASS"));

    let tampered =
        std::fs::read_to_string(&path)
            .unwrap()
            .replacen("\"value\": -0.0", "\"value\": -1.0", 1);
    std::fs::write(&path, tampered).unwrap();
    let verify = boxbound(&["certify", "--certificate", path_text, "--poly", "x1^2 + x1"]);
    assert_eq!(verify.status.code(), Some(1));
    assert!(stdout(&verify).contains("FAIL"));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn measure_flags_drive_the_plain_hierarchy() {
    let output = boxbound(&[
        "bound",
        "--poly",
        "x1",
        "--measure",
        "0,0",
        "--d-min",
        "1",
        "--d-max",
        "1",
        "--timing",
        "zero",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let value: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert_abs_diff_eq!(value, -1.0 / 3.0f64.sqrt(), epsilon = 1e-12);

    let broadcast = boxbound(&[
        "bound",
        "--poly",
        "x1 + x2",
        "--measure",
        "0,0",
        "--d-min",
        "1",
        "--d-max",
        "1",
        "--timing",
        "zero",
    ]);
    assert!(broadcast.status.success());
}

#[test]
fn exit_codes_classify_failures() {
    let parse = boxbound(&["bound", "--poly", "x1 +", "--d-min", "1"]);
    assert_eq!(parse.status.code(), Some(2));

    let mismatch = boxbound(&[
        "bound",
        "--poly",
        "x1 + x2",
        "--measure",
        "0,0;0,0;0,0",
        "--d-min",
        "1",
    ]);
    assert_eq!(mismatch.status.code(), Some(2));

    let oversized = boxbound(&[
        "dkhl",
        "--poly",
        "x1 + x2 + x3 + x4 + x5 + x6 + x7",
        "--d-min",
        "1",
    ]);
    assert_eq!(oversized.status.code(), Some(4));

    let measured_dkhl = boxbound(&[
        "bound",
        "--poly",
        "x1",
        "--hierarchy",
        "dkhl",
        "--measure",
        "0,0",
        "--d-min",
        "1",
    ]);
    assert_eq!(measured_dkhl.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let path = scratch("report.csv");
    let path_text = path.to_str().unwrap();
    let output = boxbound(&[
        "bound", "--poly", "x1", "--d-min", "1", "--d-max", "2", "--timing", "zero", "--out",
        path_text,
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("d,hierarchy,value,gap,wall_time_ms\n"));
    assert_eq!(written.lines().count(), 3);
    let _ = std::fs::remove_file(&path);
}
