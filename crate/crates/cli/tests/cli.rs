use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn strata(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_strata"));
    cmd.args(args);
    match workers {
        Some(w) => cmd.env("STRATA_WORKERS", w),
        None => cmd.env_remove("STRATA_WORKERS"),
    };
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_accepts_the_interval_model() {
    let out = strata(&["validate", "--input", path(&data("interval.json"))], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["valid"], true);
}

#[test]
fn validate_names_the_broken_square() {
    let out = strata(&["validate", "--input", path(&data("broken_square.json"))], None);
    assert_eq!(out.status.code(), Some(1));
    let v = &json(&out)["violations"][0];
    assert_eq!(v["kind"], "composition_violated");
    assert_eq!((v["x"].as_str(), v["z"].as_str()), (Some("a"), Some("d")));
}

#[test]
fn validate_rejects_a_non_complex_as_a_failed_check() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.json");
    std::fs::write(&file, r#"{"lo": 0, "dims": [1, 1, 1], "differentials": [[[1]], [[1]]]}"#).unwrap();
    let out = strata(&["validate", "--input", file.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["violations"][0]["degree"], 2);
}

#[test]
fn recollement_check_passes_on_the_interval() {
    let input = data("interval.json");
    let args = [
        "check-recollement",
        "--input",
        path(&input),
        "--closed",
        "0",
        "--samples",
        "100",
        "--seed",
        "7",
    ];
    let out = strata(&args, None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["suite"]["passed"], true);
    assert_eq!(r["suite"]["samples"], 100);
    assert_eq!(r["suite"]["axioms"].as_array().unwrap().len(), 13);
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let input = data("cpn2.json");
    let args = ["check-recollement", "--input", path(&input), "--samples", "20", "--seed", "11", "--field", "101"];
    let one = strata(&args, Some("1"));
    let four = strata(&args, Some("4"));
    let again = strata(&args, Some("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.stdout, again.stdout);
}

#[test]
fn k0_report_on_the_cell_model() {
    let out = strata(&["k0-report", "--input", path(&data("cpn2.json"))], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["k0_rank"], 3);
    assert_eq!(r["generator_matrix"]["matrix"], serde_json::json!([[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
    assert_eq!(r["depth"], 3);
}

#[test]
fn decompose_logs_each_step() {
    let out = strata(&["decompose", "--input", path(&data("interval.json")), "--order", "one-at-a-time"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let steps = r["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    assert_eq!(steps[0]["closed"], serde_json::json!(["0"]));
    assert_eq!(r["pieces"][1]["elements"], serde_json::json!(["v1", "e"]));
}

#[test]
fn generated_and_ingested_diagrams_feed_back_in() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen.json");
    let out = strata(&["gen", "--seed", "5", "--size", "4", "--output", gen.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let again = strata(&["gen", "--seed", "5", "--size", "4"], None);
    assert_eq!(std::fs::read(&gen).unwrap(), again.stdout);
    assert_eq!(strata(&["validate", "--input", gen.to_str().unwrap()], None).status.code(), Some(0));
    assert_eq!(strata(&["k0-report", "--input", gen.to_str().unwrap()], None).status.code(), Some(0));

    let out = strata(&["ingest", "--input", path(&data("interval_complex.json"))], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["fibers"][1]["elements"], serde_json::json!(["v1", "v0-v1"]));
    let diagram = dir.path().join("ingested.json");
    std::fs::write(&diagram, r["diagram"].to_string()).unwrap();
    let out = strata(&["k0-report", "--input", diagram.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(strata(&["validate", "--input", "/does/not/exist.json"], None).status.code(), Some(2));
    let interval = data("interval.json");
    let closed = ["check-recollement", "--input", path(&interval), "--closed", "1"];
    let out = strata(&closed, None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not closed"));
    let field = ["validate", "--input", path(&interval), "--field", "4"];
    assert_eq!(strata(&field, None).status.code(), Some(2));
    assert_eq!(strata(&["validate", "--input", path(&data("cpn2.json"))], Some("zero")).status.code(), Some(2));
}
