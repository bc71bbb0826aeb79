//! End-to-end tests of the `hcmu` binary: exit codes, JSON/CSV artifacts,
//! determinism, and the machine-parsable diagnostic format.

use serde_json::Value;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcmu"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hcmu-cli-{name}-{}", std::process::id()));
    fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn file_json(path: &PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(path).expect("artifact exists"))
        .expect("artifact is JSON")
}

fn assert_one_line_diag(out: &Output, code: i32, kind: &str) {
    assert_eq!(out.status.code(), Some(code));
    let stderr = String::from_utf8_lossy(&out.stderr);
    let lines: Vec<&str> = stderr.trim_end().lines().collect();
    assert_eq!(lines.len(), 1, "diagnostic must be one line, got: {stderr}");
    let prefix = format!("error: code={code} kind={kind} msg=\"");
    assert!(
        lines[0].starts_with(&prefix),
        "diagnostic {:?} missing prefix {prefix:?}",
        lines[0]
    );
}

#[test]
fn classify_lists_three_profiles_for_angle_four() {
    let out = run(&["classify", "--alpha", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "profiles");
    assert!(v["timestamp"].as_u64().is_some());
    let profiles = v["data"].as_array().expect("profile list");
    assert_eq!(profiles.len(), 3);
    for p in profiles {
        assert_eq!(p["alpha"], 4.0);
        assert!(p["i1"].as_u64().is_some());
        assert!(p["role1"].is_string());
        assert!(p["lambda"].as_f64().expect("conical ratio") < -1.0);
        assert!(p["case_label"].is_string());
    }
}

#[test]
fn classify_rejects_smooth_angle() {
    let out = run(&["classify", "--alpha", "1"]);
    assert_one_line_diag(&out, 2, "usage");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["classify", "--alpha", "4", "--bogus"]);
    assert_one_line_diag(&out, 2, "usage");
}

#[test]
fn hurwitz_agrees_on_mixed_shape_data() {
    let out = run(&["hurwitz", "--degree", "6", "--partitions", "2,2,2|3,3|4,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let d = &v["data"];
    assert_eq!(d["shape"], "one-extra-cycle");
    assert_eq!(d["genus"], 0);
    assert_eq!(d["criterion"], true);
    assert_eq!(d["oracle"], true);
    assert_eq!(d["agree"], true);
    assert_eq!(d["realizable"], true);
}

#[test]
fn hurwitz_uses_criterion_above_the_search_cap() {
    let out = run(&["hurwitz", "--degree", "9", "--partitions", "9|9|5,1,1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let d = stdout_json(&out)["data"].clone();
    assert_eq!(d["shape"], "one-extra-cycle");
    assert_eq!(d["criterion"], true);
    assert_eq!(d["oracle"], Value::Null);
    assert_eq!(d["agree"], Value::Null);
    assert_eq!(d["realizable"], true);
}

#[test]
fn hurwitz_rejects_undecidable_data_above_the_cap() {
    let out = run(&["hurwitz", "--degree", "13", "--partitions", "13|13"]);
    assert_one_line_diag(&out, 2, "usage");
}

#[test]
fn hurwitz_rejects_mismatched_partition_sum() {
    let out = run(&["hurwitz", "--degree", "6", "--partitions", "2,2,2|3,3,1"]);
    assert_one_line_diag(&out, 2, "usage");
}

#[test]
fn construct_then_verify_passes() {
    let dir = scratch("round-trip");
    let model = dir.join("model.json");
    let report = dir.join("report.json");
    let out = run(&[
        "construct",
        "--alpha",
        "2",
        "--i1",
        "2",
        "--i2",
        "1",
        "--seed",
        "7",
        "--out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let artifact = file_json(&model);
    assert_eq!(artifact["kind"], "model");
    assert_eq!(artifact["data"]["i1"], 2);

    let out = run(&["verify", model.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("overall"), "missing summary row: {table}");
    assert!(!table.contains("FAIL"), "unexpected failures: {table}");
    let rep = file_json(&report);
    assert_eq!(rep["kind"], "report");
    assert_eq!(rep["data"]["passed"]["gauss_bonnet"], true);
}

#[test]
fn verify_reads_bare_model_json() {
    let dir = scratch("bare");
    let model = dir.join("model.json");
    let bare = dir.join("bare.json");
    let out = run(&[
        "construct", "--alpha", "2", "--i1", "2", "--i2", "1", "--seed", "7", "--out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let artifact = file_json(&model);
    fs::write(&bare, serde_json::to_string(&artifact["data"]).unwrap()).unwrap();
    let out = run(&["verify", bare.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn construct_is_deterministic_apart_from_timestamp() {
    let dir = scratch("determinism");
    let first = dir.join("first.json");
    let second = dir.join("second.json");
    for path in [&first, &second] {
        let out = run(&[
            "construct", "--alpha", "3", "--beta", "2", "--i1", "2", "--i2", "1", "--role2",
            "max", "--seed", "11", "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let mut a = file_json(&first);
    let mut b = file_json(&second);
    a.as_object_mut().unwrap().remove("timestamp");
    b.as_object_mut().unwrap().remove("timestamp");
    assert_eq!(a, b, "identical command lines must agree apart from the timestamp");
}

#[test]
fn construct_requires_an_unambiguous_profile() {
    let out = run(&["construct", "--alpha", "4"]);
    assert_one_line_diag(&out, 2, "usage");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("narrow"), "should list candidates: {stderr}");
}

#[test]
fn gauge_flag_must_be_two_reals() {
    let out = run(&[
        "construct", "--alpha", "2", "--i1", "2", "--i2", "1", "--gauge", "bogus",
    ]);
    assert_one_line_diag(&out, 2, "usage");
}

#[test]
fn paper_constants_reports_both_normalizations() {
    let out = run(&[
        "construct", "--alpha", "2", "--i1", "2", "--i2", "1", "--seed", "7",
        "--paper-constants",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let used = v["constants"]["residue_scale"].as_f64().unwrap();
    let alt = v["constants"]["residue_scale_alternative"].as_f64().unwrap();
    assert!((used - 3.0 * alt).abs() <= 1e-15 * used.abs());
    assert_eq!(v["constants"]["energy_constant_tabulated"], 6.0);
}

#[test]
fn verify_flags_tampered_model() {
    let dir = scratch("tamper");
    let model = dir.join("model.json");
    let bad = dir.join("tampered.json");
    let out = run(&[
        "construct", "--alpha", "2", "--i1", "2", "--i2", "1", "--seed", "7", "--out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut artifact = file_json(&model);
    let c = artifact["data"]["c"].as_array().unwrap().clone();
    artifact["data"]["c"] =
        Value::from(vec![c[0].as_f64().unwrap() * 1.5, c[1].as_f64().unwrap()]);
    fs::write(&bad, serde_json::to_string(&artifact).unwrap()).unwrap();

    let out = run(&["verify", bad.to_str().unwrap()]);
    assert_one_line_diag(&out, 1, "verification");
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("FAIL"), "table should mark the failed check: {table}");
}

#[test]
fn verify_writes_grid_csv() {
    let dir = scratch("grid");
    let model = dir.join("model.json");
    let grid = dir.join("grid.csv");
    let out = run(&[
        "construct", "--alpha", "2", "--i1", "2", "--i2", "1", "--seed", "7", "--out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "verify",
        model.to_str().unwrap(),
        "--grid",
        "8",
        "--out",
        grid.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(&grid).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,chart,K,rho"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 120, "expected a dense grid, got {} rows", rows.len());
    assert!(rows.iter().any(|r| r.contains(",plane,")));
    assert!(rows.iter().any(|r| r.contains(",reciprocal,")));
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5, "bad row {row}");
        for idx in [0usize, 1, 3, 4] {
            assert!(fields[idx].parse::<f64>().unwrap().is_finite(), "bad row {row}");
        }
    }
}

#[test]
fn grid_requires_an_output_path() {
    let dir = scratch("grid-no-out");
    let model = dir.join("model.json");
    let out = run(&[
        "construct", "--alpha", "2", "--i1", "2", "--i2", "1", "--seed", "7", "--out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", model.to_str().unwrap(), "--grid", "8"]);
    assert_one_line_diag(&out, 2, "usage");
}

#[test]
fn sweep_tabulates_ranges() {
    let dir = scratch("sweep");
    let table = dir.join("table.csv");
    let out = run(&[
        "sweep", "--alpha", "2..4", "--beta", "2..3", "--out", table.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(&table).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("alpha,beta,case_label,i1,i2,role1,role2,lambda")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 44, "the 2..4 x 2..3 table is a fixed classification");
    for row in &rows {
        assert_eq!(row.split(',').count(), 8, "bad row {row}");
    }
    assert!(rows.iter().any(|r| r.contains("saddle")));
    let summary = String::from_utf8_lossy(&out.stdout);
    assert!(summary.contains("44 profiles"), "summary line: {summary}");
}

#[test]
fn sweep_accepts_fractional_values() {
    let out = run(&["sweep", "--alpha", "4", "--beta", "0,0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8_lossy(&out.stdout);
    assert!(csv.lines().count() > 1, "cusp and fractional rows expected: {csv}");
    assert!(csv.contains("cusp"), "beta 0 rows are cusp profiles: {csv}");
}
