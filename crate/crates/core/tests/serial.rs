use std::sync::Arc;

use mfsolve::builder::build_class_k;
use mfsolve::builder::fixtures::{appendix_c_fixtures, three_qubit_class3_spec, two_qubit_class2_hamiltonian};
use mfsolve::detector::{classify, DetectorOptions};
use mfsolve::group::orbital_rotation;
use mfsolve::ops::AlgebraBasis;
use mfsolve::serial::{ProjectorDoc, ReportDoc, RotationDoc, SpecDoc, VerdictDoc};

#[test]
fn spec_documents_round_trip() {
    let mut specs: Vec<_> = appendix_c_fixtures::<f64>().unwrap().into_iter().map(|f| f.spec).collect();
    specs.push(three_qubit_class3_spec().unwrap());
    for spec in specs {
        let doc = SpecDoc::from_spec(&spec).unwrap();
        let text = doc.to_json().unwrap();
        let back = SpecDoc::from_json(&text).unwrap();
        assert_eq!(back, doc);
        let rebuilt = back.to_spec::<f64>().unwrap();
        assert!(build_class_k(&rebuilt).unwrap().approx_eq(&build_class_k(&spec).unwrap(), 1e-14));
    }
}

#[test]
fn class2_spec_document_shape() {
    let spec = appendix_c_fixtures::<f64>().unwrap().remove(1).spec;
    let doc = SpecDoc::from_spec(&spec).unwrap();
    assert_eq!(doc.algebra, "u");
    assert_eq!(doc.levels.len(), 2);
    assert_eq!(doc.levels[0].projector, Some(ProjectorDoc::Fixed(vec![(0, 1.0)])));
    assert_eq!(doc.levels[1].projector, None);
    let json: serde_json::Value = serde_json::from_str(&doc.to_json().unwrap()).unwrap();
    assert_eq!(json["levels"][1]["rotation"][0]["generator"], "kappa(2,3)");
}

#[test]
fn rotation_document_round_trip() {
    let r = orbital_rotation::<f64>(3, &[(1, 2, 0.25, -0.5), (2, 3, 1.0, 0.0)]).unwrap();
    let doc = RotationDoc::from_rotation(&r).unwrap();
    let back: RotationDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(back.to_rotation::<f64>().unwrap().factors(), r.factors());
}

#[test]
fn report_document_carries_rebuildable_spec() {
    let h = two_qubit_class2_hamiltonian::<f64>().unwrap();
    let basis = Arc::new(AlgebraBasis::su2_sum(2));
    let report = classify(&h, basis.clone(), &DetectorOptions::default()).unwrap();
    let doc = ReportDoc::from_report(&report, &basis).unwrap();
    assert_eq!(doc.verdict, VerdictDoc::Class { k: 2 });
    assert!(doc.certificate.certified);
    assert_eq!(doc.eigenstates.len(), 4);
    let text = serde_json::to_string(&doc).unwrap();
    let back: ReportDoc = serde_json::from_str(&text).unwrap();
    let rebuilt = build_class_k(&back.spec.unwrap().to_spec::<f64>().unwrap()).unwrap();
    assert!(rebuilt.approx_eq(&h, 1e-8));
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["verdict"]["kind"], "class");
}
