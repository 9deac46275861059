//! The files under `fixtures/` are generated from the library fixtures. Run with
//! `MFSOLVE_BLESS=1` to rewrite them after a deliberate change.

use std::path::PathBuf;

use mfsolve::builder::fixtures::{
    class1_fixture, class2_fixture, partially_solvable_hamiltonian, three_qubit_class3_spec,
    two_qubit_class2_hamiltonian, two_qubit_class2_spec, NON_MF_BLOCK,
};
use mfsolve::builder::ClassSpec;
use mfsolve::ops::text::{format_polynomial, parse_polynomial};
use mfsolve::serial::SpecDoc;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn spec_json(spec: &ClassSpec<f64>) -> String {
    SpecDoc::from_spec(spec).unwrap().to_json().unwrap() + "\n"
}

fn expected_files() -> Vec<(&'static str, String)> {
    let c1 = class1_fixture::<f64>().unwrap();
    let c2 = class2_fixture::<f64>().unwrap();
    vec![
        ("appendix_b_non_mf.txt", NON_MF_BLOCK.to_string()),
        ("appendix_b_hamiltonian.txt", format_polynomial(&partially_solvable_hamiltonian::<f64>().unwrap())),
        ("class1_spec.json", spec_json(&c1.spec)),
        ("class1_hamiltonian.txt", format_polynomial(&c1.build().unwrap())),
        ("class1_expected.txt", format_polynomial(&c1.expected)),
        ("class2_spec.json", spec_json(&c2.spec)),
        ("class2_hamiltonian.txt", format_polynomial(&c2.build().unwrap())),
        ("class2_expected.txt", format_polynomial(&c2.expected)),
        ("qmf2_hamiltonian.txt", format_polynomial(&two_qubit_class2_hamiltonian::<f64>().unwrap())),
        ("qmf2_spec.json", spec_json(&two_qubit_class2_spec().unwrap())),
        ("class3_qubits_spec.json", spec_json(&three_qubit_class3_spec().unwrap())),
        ("su2_generators.txt", "# family: pauli\n# modes: 1\n1i : z1\n---\n1i : x1\n".to_string()),
    ]
}

#[test]
fn fixture_files_are_current() {
    let bless = std::env::var_os("MFSOLVE_BLESS").is_some();
    for (name, content) in expected_files() {
        let path = dir().join(name);
        if bless {
            std::fs::create_dir_all(dir()).unwrap();
            std::fs::write(&path, &content).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, content, "{name} is stale; rerun with MFSOLVE_BLESS=1");
    }
}

#[test]
fn shipped_hamiltonians_parse_back() {
    for (name, content) in expected_files() {
        if name.ends_with("hamiltonian.txt") {
            let p = parse_polynomial::<f64>(&content, None, None).unwrap();
            assert_eq!(format_polynomial(&p), content);
        }
    }
}
