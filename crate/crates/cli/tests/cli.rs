use std::path::PathBuf;
use std::process::{Command, Output};

use mfsolve::ops::text::parse_polynomial;
use mfsolve::ops::Factor;
use mfsolve::Polynomial;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfsolve")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path.display().to_string()
}

fn polynomial(text: &str) -> Polynomial {
    parse_polynomial(text, None, None).unwrap()
}

#[test]
fn parse_shipped_non_mf_block() {
    let text = stdout(&run(&["parse", &fixture("appendix_b_non_mf.txt")]));
    assert!(text.contains("# terms: 18"));
    let p = polynomial(&text);
    assert_eq!(p.len(), 18);
    assert_eq!(p, polynomial(&std::fs::read_to_string(fixture("appendix_b_non_mf.txt")).unwrap()));
}

#[test]
fn parse_round_trips_its_output() {
    let dir = tempfile::tempdir().unwrap();
    let first = stdout(&run(&["parse", &fixture("class2_hamiltonian.txt")]));
    let again = write_temp(&dir, "again.txt", &first);
    let second = stdout(&run(&["parse", &again]));
    assert_eq!(polynomial(&first), polynomial(&second));
    // only the input line of the header differs
    let body = |s: &str| s.lines().filter(|l| !l.starts_with("# input")).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&first), body(&second));
}

#[test]
fn parse_empty_file_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "empty.txt", "");
    let text = stdout(&run(&["parse", &path]));
    assert!(text.contains("# terms: 0"));
    assert!(polynomial(&text).is_zero());
}

#[test]
fn parse_errors_exit_with_parse_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.txt", "# modes: 3\n0.5 : 3^^\n");
    let out = run(&["parse", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let over = write_temp(&dir, "over.txt", "# modes: 2\n1 : 3^ 3\n");
    assert_eq!(run(&["parse", &over]).status.code(), Some(2));
}

#[test]
fn generate_class1_matches_printed_coefficients() {
    let text = stdout(&run(&["generate", &fixture("class1_spec.json")]));
    assert!(text.contains("# class: 1"));
    let h = polynomial(&text);
    let expected = polynomial(&std::fs::read_to_string(fixture("class1_expected.txt")).unwrap());
    assert!(h.try_sub(&expected).unwrap().max_abs_coefficient() < 0.05);
}

#[test]
fn generate_identity_spec_is_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"family": "fermionic", "modes": 2, "algebra": "u", "levels": [
        {"function": [{"monomial": [0], "coefficient": 1.5}, {"monomial": [0, 1], "coefficient": -2.0}],
         "rotation": []}]}"#;
    let path = write_temp(&dir, "spec.json", spec);
    let h = polynomial(&stdout(&run(&["generate", &path])));
    assert!(h.split_diagonal().1.is_zero());
    assert_eq!(h.coefficient_of(&[Factor::create(1), Factor::annihilate(1)]).re, 1.5);
}

#[test]
fn generate_reports_commutation_violation() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"family": "fermionic", "modes": 3, "algebra": "u", "levels": [
        {"function": [{"monomial": [0], "coefficient": 1.0}], "rotation": [],
         "projector": {"fixed": [[0, 1.0]]}},
        {"function": [{"monomial": [1], "coefficient": 1.0}],
         "rotation": [{"generator": "kappa(1,2)", "angle": 0.4}]}]}"#;
    let path = write_temp(&dir, "spec.json", spec);
    let out = run(&["generate", &path]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("kappa(1,2)"), "{err}");
    assert!(err.contains("level"), "{err}");
}

#[test]
fn classify_class2_reports_class_two() {
    let text = stdout(&run(&["classify", &fixture("class2_hamiltonian.txt")]));
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["report"]["verdict"]["kind"], "class");
    assert_eq!(doc["report"]["verdict"]["k"], 2);
    assert_eq!(doc["report"]["certificate"]["certified"], true);
    assert_eq!(doc["provenance"]["seed"], 0);
}

#[test]
fn classify_is_reproducible() {
    let path = fixture("qmf2_hamiltonian.txt");
    let a = stdout(&run(&["classify", &path, "--seed", "7"]));
    let b = stdout(&run(&["classify", &path, "--seed", "7"]));
    assert_eq!(a, b);
    let doc: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["report"]["verdict"]["k"], 2);
}

#[test]
fn classify_inconclusive_exit_code() {
    // no rotation reaches a variance of 1e-40 ||H||^2, but every eigenvector is a Slater state
    let out = run(&["classify", &fixture("class1_hamiltonian.txt"), "--tol-variance", "1e-40"]);
    assert_eq!(out.status.code(), Some(5));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["report"]["verdict"]["kind"], "inconclusive");
}

#[test]
fn verify_reconstruction() {
    let text = stdout(&run(&["verify", &fixture("class1_hamiltonian.txt"), &fixture("class1_spec.json")]));
    let line = text.lines().find(|l| l.starts_with("PASS")).unwrap();
    let distance: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!(distance < 1e-8);
    let out = run(&["verify", &fixture("class2_hamiltonian.txt"), &fixture("class1_spec.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn jw_of_number_operator() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "n1.txt", "1 : 1^ 1\n");
    let q = polynomial(&stdout(&run(&["jw", &path])));
    assert_eq!(q, polynomial("# family: pauli\n# modes: 1\n0.5 :\n-0.5 : z1\n"));
}

#[test]
fn closure_of_su2_seed() {
    let text = stdout(&run(&["closure", &fixture("su2_generators.txt")]));
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["algebra"]["dimension"], 3);
    assert_eq!(doc["algebra"]["csa_dimension"], 1);
    assert!(doc["algebra"]["max_structure_imag"].as_f64().unwrap() < 1e-10);
}

#[test]
fn solve_lists_two_qubit_spectrum() {
    let text = stdout(&run(&["solve", &fixture("qmf2_hamiltonian.txt")]));
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(rows.len(), 4);
    let r = 2f64.sqrt();
    for (row, want) in rows.iter().zip([-r, -r, r, r]) {
        assert!((row[1].parse::<f64>().unwrap() - want).abs() < 1e-10);
        assert_eq!(row[2], "2");
    }
}

#[test]
fn solve_beyond_oracle_cap() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "big.txt", "# modes: 15\n1 : 15^ 15\n");
    assert_eq!(run(&["solve", &path]).status.code(), Some(4));
}

#[test]
fn output_file_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.txt");
    let status = run(&["generate", &fixture("qmf2_spec.json"), "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let h = polynomial(&std::fs::read_to_string(out).unwrap());
    let want = polynomial(&std::fs::read_to_string(fixture("qmf2_hamiltonian.txt")).unwrap());
    assert!(h.approx_eq(&want, 1e-12));
}
