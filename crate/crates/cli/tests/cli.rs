use std::process::{Command, Output};

use berndt_core::closedform::{berndt_closed_form, ClosedForm, ClosedFormTerm};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berndt-forge")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["verify", "--help"])), 0);
}

#[test]
fn missing_or_unknown_command_is_usage_error() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["coeffs", "S", "4", "--prec-bits", "abc"])), 2);
}

#[test]
fn coeffs_text() {
    let o = run(&["coeffs", "S", "4"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("S_0 = 1"), "{out}");
    assert!(out.contains("S_2 = 1 - x"), "{out}");
    assert!(out.contains("S_4 = 1 - 6*x + 5*x^2"), "{out}");
}

#[test]
fn coeffs_json_has_schema() {
    let o = run(&["coeffs", "A", "6", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], "berndt-forge/1");
    assert_eq!(v["command"], "coeffs");
}

#[test]
fn coeffs_unknown_family_is_usage_error() {
    let o = run(&["coeffs", "Z", "4"]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn verify_unknown_suite_is_usage_error() {
    assert_eq!(code(&run(&["verify", "nonsense"])), 2);
}

#[test]
fn verify_low_precision_is_usage_error() {
    assert_eq!(code(&run(&["verify", "tables", "--prec-bits", "96"])), 2);
}

#[test]
fn verify_tables_json_is_deterministic() {
    let args = ["verify", "tables", "--format", "json", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["schema"], "berndt-forge/1");
    assert_eq!(v["suite"], "tables");
    assert_eq!(v["summary"]["fail"], 0);
    for item in v["items"].as_array().expect("items") {
        for key in ["lhs", "rhs", "abs_residual", "rel_residual", "tolerance"] {
            assert!(item[key].is_string(), "{key} in {item}");
        }
    }
}

#[test]
fn verify_residues_writes_report_file() {
    let dir = std::env::temp_dir().join(format!("berndt-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("residues.json");
    let o = run(&["verify", "residues", "--seed", "7", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["summary"]["fail"], 0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn report_to_unwritable_path_is_io_error() {
    assert_eq!(code(&run(&["report", "/nonexistent-dir/sub/report.json"])), 5);
}

#[test]
fn closed_form_json_round_trips() {
    let o = run(&["closed-form", "berndt", "--m", "2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], "berndt-forge/1");
    let terms: Vec<ClosedFormTerm> = serde_json::from_value(v["closed_form"].clone()).unwrap();
    let form = ClosedForm::from_terms(&terms).unwrap();
    assert_eq!(form, berndt_closed_form(2).unwrap());
    assert!(v["value"].is_string());
}

#[test]
fn series_at_pi_matches_closed_form() {
    let s = json(&run(&["series", "G", "--p", "3", "--m", "2", "--format", "json"]));
    let c = json(&run(&["closed-form", "g2", "--format", "json"]));
    let a = s["value"].as_str().unwrap();
    let b = c["value"].as_str().unwrap();
    assert_eq!(a[..40], b[..40]);
}

#[test]
fn series_bad_argument_is_usage_error() {
    assert_eq!(code(&run(&["series", "G", "--p", "3", "--y", "banana"])), 2);
}

#[test]
fn barnes_bad_period_is_usage_error() {
    assert_eq!(code(&run(&["barnes", "--s", "5", "--w", "1", "--periods", "1+q", "--signs", "-"])), 2);
}
