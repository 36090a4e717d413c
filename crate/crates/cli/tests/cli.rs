//! End-to-end tests of the `cet` binary: exit codes, diagnostics, report
//! shapes, and bit-exact agreement with direct library calls.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::{Command, Output};

use cet_core::{
    ci, jitter_average, transent, ColumnSelector, EstimatorConfig, IngestOptions, JitterPolicy,
    SampleMatrix,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

/// Runs the binary with a scrubbed environment so CET_DATA_DIR from the
/// outside world cannot leak into tests.
fn cet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cet"))
        .args(args)
        .env_remove("CET_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json_value(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout is JSON")
}

fn load_fixture(name: &str, cols: &[&str]) -> SampleMatrix {
    let opts = IngestOptions {
        columns: Some(cols.iter().map(|c| c.parse::<ColumnSelector>().unwrap()).collect()),
        ..IngestOptions::default()
    };
    cet_core::load_csv(&fixture(name), &opts).unwrap().matrix
}

// ---- success paths ---------------------------------------------------------

#[test]
fn copent_json_equals_library_bit_exactly() {
    let path = fixture("airquality.csv");
    let out = cet(&["copent", "--input", path.to_str().unwrap(), "--cols", "1,2,3,4"]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));

    let v = json_value(&out);
    assert_eq!(v["operation"], "copent");
    assert_eq!(v["input"]["rows"], 111);
    assert_eq!(v["input"]["dropped_rows"], 42);
    assert_eq!(v["config"]["k"], 3);
    assert_eq!(v["config"]["norm"], "max");
    assert!(v["config"].get("seed").is_none(), "no seed echo without jitter");

    let matrix = load_fixture("airquality.csv", &["1", "2", "3", "4"]);
    let want = cet_core::copent(&matrix, &EstimatorConfig::default()).unwrap();
    let got = v["result"]["value"].as_f64().unwrap();
    assert_eq!(got.to_bits(), want.to_bits());
}

#[test]
fn ci_matches_library() {
    let path = fixture("airquality.csv");
    let out = cet(&[
        "ci", "--input", path.to_str().unwrap(),
        "--x", "Ozone", "--y", "Solar.R", "--z", "Temp,Wind",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let got = json_value(&out)["result"]["value"].as_f64().unwrap();

    let m = load_fixture("airquality.csv", &["Ozone", "Solar.R", "Temp", "Wind"]);
    let x = m.column(0).to_vec();
    let y = m.column(1).to_vec();
    let z = m.values().slice(ndarray::s![.., 2..]);
    let want = ci(&x, &y, z, &EstimatorConfig::default()).unwrap();
    assert_eq!(got.to_bits(), want.to_bits());
}

#[test]
fn jittered_transent_equals_library_and_is_deterministic() {
    let path = fixture("pm25.csv");
    let args = [
        "transent", "--input", path.to_str().unwrap(),
        "--x", "PRES", "--y", "pm2.5", "--lag", "1",
        "--jitter", "--repeats", "10", "--seed", "7", "--format", "csv",
    ];
    let a = cet(&args);
    let b = cet(&args);
    assert!(a.status.success(), "stderr: {}", stderr_str(&a));
    assert_eq!(a.stdout, b.stdout, "same invocation, same bytes");

    let text = stdout_str(&a);
    let value: f64 = text.lines().nth(1).unwrap().parse().unwrap();

    let m = load_fixture("pm25.csv", &["PRES", "pm2.5"]);
    let policy = JitterPolicy { repeats: 10, scale: 1e-6, seed: 7 };
    let want = jitter_average(&m, &policy, &EstimatorConfig::default(), |mm, c| {
        transent(&mm.column(0).to_vec(), &mm.column(1).to_vec(), 1, c)
    })
    .unwrap();
    assert_eq!(value.to_bits(), want.to_bits());
}

#[test]
fn lagscan_report_shape_and_direction() {
    let path = fixture("pm25.csv");
    let out = cet(&[
        "lagscan", "--input", path.to_str().unwrap(),
        "--x", "pm2.5", "--y", "PRES", "--max-lag", "4",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let v = json_value(&out);
    assert_eq!(v["result"]["direction"], "y\u{2192}x");
    assert_eq!(v["result"]["lags"].as_array().unwrap().len(), 4);
    assert_eq!(v["result"]["values"].as_array().unwrap().len(), 4);

    let csv_out = cet(&[
        "lagscan", "--input", path.to_str().unwrap(),
        "--x", "pm2.5", "--y", "PRES", "--max-lag", "4", "--format", "csv",
    ]);
    let text = stdout_str(&csv_out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lag,value");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("1,"));
}

#[test]
fn select_on_subset_ranks_planted_signal() {
    let path = fixture("heart.csv");
    let out = cet(&[
        "select", "--input", path.to_str().unwrap(),
        "--target", "V58", "--cols", "V3,V4,V9,V12,V32,V16,V58",
        "--top", "3", "--format", "csv",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "feature,score");
    assert_eq!(lines.len(), 4);
    // scores strictly decreasing
    let scores: Vec<f64> =
        lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(scores[0] > scores[1] && scores[1] > scores[2]);
}

#[test]
fn select_threshold_feature_includes_anchor() {
    let path = fixture("heart.csv");
    let out = cet(&[
        "select", "--input", path.to_str().unwrap(),
        "--target", "V58", "--cols", "V3,V4,V9,V16,V19,V58",
        "--threshold-feature", "V16", "--format", "csv",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    let features: Vec<&str> =
        text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert!(features.contains(&"V16"), "anchor itself is selected: {features:?}");
    // V19 is a weak attribute, below the V16 cut by construction
    assert!(!features.contains(&"V19"), "weak feature stays out: {features:?}");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let path = fixture("airquality.csv");
    let to_stdout = cet(&["copent", "--input", path.to_str().unwrap(), "--cols", "Wind,Temp"]);
    let to_file = cet(&[
        "copent", "--input", path.to_str().unwrap(), "--cols", "Wind,Temp",
        "--output", file.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&file).unwrap(), to_stdout.stdout);
}

#[test]
fn data_dir_env_resolves_relative_inputs() {
    let out = Command::new(env!("CARGO_BIN_EXE_cet"))
        .args(["copent", "--input", "airquality.csv", "--cols", "Ozone,Temp"])
        .env("CET_DATA_DIR", fixture("").to_str().unwrap())
        .current_dir(std::env::temp_dir())
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    assert_eq!(json_value(&out)["input"]["rows"], 116);
}

#[test]
fn headerless_files_use_positional_names() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    for i in 0..40 {
        let x = (i as f64 * 0.77).sin() * 10.0;
        let y = (i as f64 * 1.31).cos() * 5.0;
        writeln!(f, "{x},{y}").unwrap();
    }
    let out = cet(&[
        "copent", "--input", f.path().to_str().unwrap(), "--cols", "1,2", "--no-header",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let v = json_value(&out);
    assert_eq!(v["input"]["columns"][0], "c1");
    assert_eq!(v["input"]["columns"][1], "c2");
    assert_eq!(v["input"]["rows"], 40);
}

#[test]
fn help_and_version_exit_zero() {
    let help = cet(&["--help"]);
    assert!(help.status.success());
    let text = stdout_str(&help);
    for sub in ["copent", "ci", "transent", "lagscan", "select"] {
        assert!(text.contains(sub), "help mentions {sub}");
    }
    assert!(cet(&["--version"]).status.success());
}

// ---- usage errors (exit 2) -------------------------------------------------

fn assert_usage_error(out: &Output, needle: &str) {
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_str(out));
    let err = stderr_str(out);
    assert_eq!(err.lines().count(), 1, "single-line diagnostic: {err:?}");
    assert!(err.starts_with("error[usage]:"), "prefix: {err:?}");
    assert!(err.contains(needle), "{err:?} should mention {needle:?}");
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = cet(&["copent", "--frobnicate"]);
    assert_usage_error(&out, "--frobnicate");
}

#[test]
fn single_column_copent_is_usage_error() {
    let path = fixture("airquality.csv");
    let out = cet(&["copent", "--input", path.to_str().unwrap(), "--cols", "Ozone"]);
    assert_usage_error(&out, "two columns");
}

#[test]
fn duplicate_columns_are_usage_error() {
    let path = fixture("airquality.csv");
    let out = cet(&["copent", "--input", path.to_str().unwrap(), "--cols", "Ozone,Ozone"]);
    assert_usage_error(&out, "Ozone");
}

#[test]
fn unknown_column_is_usage_error() {
    let path = fixture("airquality.csv");
    let out = cet(&["copent", "--input", path.to_str().unwrap(), "--cols", "Ozone,Nope"]);
    assert_usage_error(&out, "Nope");
}

#[test]
fn oversized_lag_is_usage_error() {
    let path = fixture("pm25.csv");
    let out = cet(&[
        "transent", "--input", path.to_str().unwrap(),
        "--x", "pm2.5", "--y", "PRES", "--lag", "600",
    ]);
    assert_usage_error(&out, "lag 600");

    let scan = cet(&[
        "lagscan", "--input", path.to_str().unwrap(),
        "--x", "pm2.5", "--y", "PRES", "--max-lag", "800", "--jitter",
    ]);
    assert_usage_error(&scan, "lag 800");
}

#[test]
fn select_needs_exactly_one_cut() {
    let path = fixture("heart.csv");
    let neither = cet(&["select", "--input", path.to_str().unwrap(), "--target", "V58"]);
    assert_eq!(neither.status.code(), Some(2));
    assert!(stderr_str(&neither).starts_with("error[usage]:"));

    let both = cet(&[
        "select", "--input", path.to_str().unwrap(), "--target", "V58",
        "--top", "5", "--threshold-feature", "V16",
    ]);
    assert_eq!(both.status.code(), Some(2));
    assert!(stderr_str(&both).starts_with("error[usage]:"));
}

#[test]
fn threshold_feature_equal_to_target_is_usage_error() {
    let path = fixture("heart.csv");
    let out = cet(&[
        "select", "--input", path.to_str().unwrap(),
        "--target", "V58", "--threshold-feature", "V58",
    ]);
    assert_usage_error(&out, "differ from --target");
}

// ---- data errors (exit 3) --------------------------------------------------

fn assert_data_error(out: &Output, needle: &str) {
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr_str(out));
    let err = stderr_str(out);
    assert_eq!(err.lines().count(), 1, "single-line diagnostic: {err:?}");
    assert!(err.starts_with("error[data]:"), "prefix: {err:?}");
    assert!(err.contains(needle), "{err:?} should mention {needle:?}");
}

#[test]
fn missing_file_is_data_error_naming_the_path() {
    let out = cet(&["copent", "--input", "definitely-not-here.csv", "--cols", "1,2"]);
    assert_data_error(&out, "definitely-not-here.csv");
}

#[test]
fn text_cell_is_data_error() {
    let path = fixture("pm25.csv");
    // cbwd holds wind-direction strings
    let out = cet(&["copent", "--input", path.to_str().unwrap(), "--cols", "pm2.5,cbwd"]);
    assert_data_error(&out, "cbwd");
}

#[test]
fn na_policy_fail_is_data_error() {
    let path = fixture("airquality.csv");
    let out = cet(&[
        "copent", "--input", path.to_str().unwrap(), "--cols", "Ozone,Temp",
        "--na-policy", "fail",
    ]);
    assert_data_error(&out, "NA");
}

#[test]
fn degenerate_ties_name_the_jitter_flag() {
    let path = fixture("pm25.csv");
    let out = cet(&[
        "lagscan", "--input", path.to_str().unwrap(),
        "--x", "PRES", "--y", "pm2.5", "--max-lag", "3",
    ]);
    assert_data_error(&out, "--jitter");

    // and the named remediation actually works
    let fixed = cet(&[
        "lagscan", "--input", path.to_str().unwrap(),
        "--x", "PRES", "--y", "pm2.5", "--max-lag", "3", "--jitter", "--repeats", "5",
    ]);
    assert!(fixed.status.success(), "stderr: {}", stderr_str(&fixed));
}
