//! End-to-end tests of the `somos` binary: exit codes, byte determinism, and
//! pipe composability between the subcommands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn somos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_somos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn tempdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("somos-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

#[test]
fn expand_emits_the_lattice_path_sequence() {
    let out = somos(&["expand", "--family", "ex1", "--terms", "11", "--no-header"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n1\n3\n7\n19\n51\n143\n407\n1183\n3487\n10415\n");
}

#[test]
fn expand_is_byte_deterministic_without_header() {
    let args = ["expand", "--family", "C5", "--params", "r=-3,s=-2,t=1", "--terms", "13",
        "--no-header"];
    assert_eq!(stdout(&somos(&args)), stdout(&somos(&args)));
    let with_header = somos(&["expand", "--family", "ex1", "--terms", "3"]);
    let text = stdout(&with_header);
    assert!(text.starts_with("# "), "header line expected: {text}");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn cf_methods_agree() {
    let expr = "1/(1 - x/(1-r*x) - x^2*g)";
    let fix = somos(&["cf", "--expr", expr, "--params", "r=2", "--terms", "9", "--no-header"]);
    let quad = somos(&[
        "cf", "--expr", expr, "--params", "r=2", "--terms", "9", "--method", "quadratic",
        "--no-header",
    ]);
    assert!(fix.status.success());
    assert_eq!(stdout(&fix), stdout(&quad));
}

#[test]
fn pipeline_matches_verify_byte_for_byte() {
    let dir = tempdir("pipeline");
    let seq = dir.join("seq.csv");
    let h = dir.join("h.csv");

    let out = somos(&["expand", "--family", "EX1R", "--params", "r=1", "--terms", "21",
        "--no-header", "--output", seq.to_str().unwrap()]);
    assert!(out.status.success());
    let out = somos(&["hankel", "--input", seq.to_str().unwrap(), "--terms", "10",
        "--no-header", "--output", h.to_str().unwrap()]);
    assert!(out.status.success());
    let fit = somos(&["fit", "--order", "4", "--input", h.to_str().unwrap()]);
    assert!(fit.status.success());
    let fit_doc: serde_json::Value = serde_json::from_str(&stdout(&fit)).unwrap();

    let verify = somos(&["verify", "--conjecture", "EX1R", "--params", "r=1", "--terms", "21",
        "--hankel-terms", "10"]);
    assert!(verify.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&verify)).unwrap();

    let seq_lines: Vec<String> =
        std::fs::read_to_string(&seq).unwrap().lines().map(String::from).collect();
    let h_lines: Vec<String> =
        std::fs::read_to_string(&h).unwrap().lines().map(String::from).collect();
    let report_seq: Vec<String> = report["sequence"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let report_h: Vec<String> = report["hankel"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(seq_lines, report_seq);
    assert_eq!(h_lines, report_h);
    assert_eq!(fit_doc["solution"], report["fit_solution"]);
    assert_eq!(report["verdict"], "confirmed");
}

#[test]
fn report_fields_keep_their_documented_order() {
    let out = somos(&["verify", "--conjecture", "EX1R", "--terms", "17", "--hankel-terms", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let expected = [
        "\"id\"", "\"params\"", "\"terms\"", "\"hankel_terms\"", "\"sequence\"", "\"hankel\"",
        "\"fit_status\"", "\"fit_solution\"", "\"fit_basis\"", "\"predicted\"", "\"verdict\"",
        "\"failing_n\"", "\"notes\"",
    ];
    let mut last = 0;
    for key in expected {
        let pos = text.find(key).unwrap_or_else(|| panic!("{key} missing"));
        assert!(pos > last, "{key} out of order");
        last = pos;
    }
}

#[test]
fn check_exit_codes_reflect_the_outcome() {
    let dir = tempdir("check");
    let h = dir.join("h.csv");
    write(&h, "1\n2\n4\n16\n64\n512\n4096\n");
    let ok = somos(&["check", "--order", "4", "--coeffs", "0,4", "--input", h.to_str().unwrap()]);
    assert!(ok.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["checked"], 3);

    let bad = somos(&["check", "--order", "4", "--coeffs", "1,1", "--input", h.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&bad)).unwrap();
    assert_eq!(doc["pass"], false);
    assert!(!doc["failures"].as_array().unwrap().is_empty());
    assert!(doc["failures"][0]["lhs"].is_string());
}

#[test]
fn check_somos6_example_file() {
    let dir = tempdir("check6");
    let h = dir.join("h.csv");
    write(&h, "# Hankel prefix\n1\n3\n2\n-23\n-231\n-1987\n-41482\n");
    let out = somos(&["check", "--order", "6", "--coeffs", "9,0,23", "--input",
        h.to_str().unwrap(), "--format", "csv", "--no-header"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "6,pass\n");
}

#[test]
fn fit_masked_somos6() {
    let dir = tempdir("fit");
    let h = dir.join("h.csv");
    write(&h, "1\n2\n-15\n-182\n-4864\n85976\n26865504\n5387832064\n687205582336\n");
    let out = somos(&["fit", "--order", "6", "--mask", "1,0,1", "--input", h.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["status"], "unique");
    assert_eq!(doc["solution"], serde_json::json!(["16", "0", "728"]));
}

#[test]
fn hankel_auto_detects_the_polynomial_ring() {
    let dir = tempdir("poly");
    let f = dir.join("seq.csv");
    // polynomial sequence prefix: constant terms 1,1,2 then linear and up
    write(
        &f,
        "1\n1\n2\n4 + r\n8 + 2*r + r^2\n17 + 5*r + 2*r^2 + r^3\n37 + 13*r + 6*r^2 + 2*r^3 + r^4\n",
    );
    let out = somos(&["hankel", "--input", f.to_str().unwrap(), "--terms", "3", "--no-header"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n1\n-2*r\n-1 - 4*r - r^2 + 2*r^3 - r^4\n");
}

#[test]
fn verify_at_a_pole_reports_and_exits_nonzero() {
    let out = somos(&["verify", "--conjecture", "C7", "--params", "r=3", "--terms", "21",
        "--hankel-terms", "8"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["verdict"], "degenerate(pole)");
    assert_eq!(doc["predicted"], serde_json::Value::Null);
}

#[test]
fn sweep_writes_report_and_prints_a_table() {
    let dir = tempdir("sweep");
    let report = dir.join("sweep.json");
    let out = somos(&["sweep", "--conjecture", "EX1R", "--grid", "r=-1..2", "--terms", "17",
        "--hankel-terms", "8", "--output", report.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["summary"]["total"], 4);
    assert_eq!(doc["summary"]["confirmed"], 4);
    assert_eq!(doc["cases"].as_array().unwrap().len(), 4);
    let table = stdout(&out);
    assert!(table.contains("verdict"));
    assert!(table.contains("confirmed"));
    assert!(table.contains("total 4"));
}

#[test]
fn usage_errors_exit_2() {
    let unknown_family = somos(&["expand", "--family", "nope", "--terms", "5"]);
    assert_eq!(unknown_family.status.code(), Some(2));
    let bad_params = somos(&["expand", "--family", "ex1", "--params", "r", "--terms", "5"]);
    assert_eq!(bad_params.status.code(), Some(2));
    let bad_mask = somos(&["fit", "--order", "4", "--mask", "1,2", "--input", "/dev/null"]);
    assert_eq!(bad_mask.status.code(), Some(2));
    let bad_expr = somos(&["cf", "--expr", "1+", "--terms", "5"]);
    assert_eq!(bad_expr.status.code(), Some(2));
    let missing_flag = somos(&["expand", "--terms", "5"]);
    assert_eq!(missing_flag.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    let dir = tempdir("domain");
    let short = dir.join("short.csv");
    write(&short, "1\n2\n3\n");
    let out = somos(&["hankel", "--input", short.to_str().unwrap(), "--terms", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let missing_param = somos(&["verify", "--conjecture", "C1", "--params", "r=1"]);
    assert_eq!(missing_param.status.code(), Some(1));
}
