use std::sync::Arc;

use mfsolve::builder::fixtures::{
    class1_fixture, class2_fixture, partially_solvable_hamiltonian, three_qubit_class3_spec,
    two_qubit_class2_hamiltonian,
};
use mfsolve::builder::{build_class_k, CsaOperators, ProjectorSpec};
use mfsolve::detector::{
    classify, csa_polynomial_split, minimize_variance, qubit_reduce, Branch, DetectorOptions, Verdict,
};
use mfsolve::ops::text::parse_polynomial;
use mfsolve::ops::{AlgebraBasis, Family};
use mfsolve::rep::{csa_eigenstates, exact_eigensystem, mf_state_check, to_matrix};
use mfsolve::{Error, Polynomial};

fn parse(src: &str) -> Polynomial {
    parse_polynomial(src, None, None).unwrap()
}

fn u(n: usize) -> Arc<AlgebraBasis<f64>> {
    Arc::new(AlgebraBasis::unitary(n))
}

fn su2(n: usize) -> Arc<AlgebraBasis<f64>> {
    Arc::new(AlgebraBasis::su2_sum(n))
}

#[test]
fn diagonal_hamiltonian_has_zero_variance_at_identity() {
    let h = parse("# modes: 3\n2 : 2^ 1^ 2 1\n-1 : 3^ 3\n");
    let states = csa_eigenstates(&AlgebraBasis::<f64>::unitary(3)).unwrap();
    let out = minimize_variance(&h, &states[5], u(3), 4, 0, 1e-8).unwrap();
    assert_eq!(out.restarts, 1);
    assert!(out.variance < 1e-20);
    assert!(out.rotation.angles().iter().all(|t| *t == 0.0));
}

#[test]
fn class1_fixture_two_electron_reference_reaches_zero_variance() {
    let h = class1_fixture::<f64>().unwrap().build().unwrap();
    let m = to_matrix(&h, 3).unwrap().matrix;
    let norm = exact_eigensystem(&to_matrix(&h, 3).unwrap()).unwrap().norm();
    // |110>: modes 1 and 2 occupied
    let reference = &csa_eigenstates(&AlgebraBasis::<f64>::unitary(3)).unwrap()[0b011];
    let out = minimize_variance(&h, reference, u(3), 32, 1, 1e-8).unwrap();
    assert!(out.variance <= 1e-8 * norm * norm);
    let residual = (&m * &out.state - &out.state * nalgebra::Complex::new(out.energy, 0.0)).norm();
    assert!(residual < 1e-6 * norm);
    assert!(mf_state_check(&out.state, Family::Fermionic, 3).unwrap().is_mf);
}

#[test]
fn entangled_spectrum_keeps_positive_variance() {
    // Bell states with four distinct energies: no product state is an eigenvector.
    let h = parse("# family: pauli\n1 : x1 x2\n0.5 : y1 y2\n0.2 : z1 z2\n");
    let exact = exact_eigensystem(&to_matrix(&h, 2).unwrap()).unwrap();
    for k in 0..4 {
        assert!(!mf_state_check(&exact.vector(k), Family::Pauli, 2).unwrap().is_mf);
    }
    let reference = &csa_eigenstates(&AlgebraBasis::<f64>::su2_sum(2)).unwrap()[0];
    let out = minimize_variance(&h, reference, su2(2), 8, 3, 1e-8).unwrap();
    assert!(out.variance > 1e-3, "{}", out.variance);
}

#[test]
fn split_pure_csa() {
    let csa = CsaOperators::<f64>::occupations(Family::Fermionic, 2).unwrap();
    let h = parse("# modes: 2\n-3 : 2^ 1^ 2 1\n");
    let s = csa_polynomial_split(&h, &csa).unwrap();
    assert!(s.remainder.is_zero());
    assert_eq!(s.states, vec![0, 1, 2, 3]);
    assert!(s.function.to_operator(&csa).unwrap().approx_eq(&h, 1e-12));
}

#[test]
fn split_x_has_no_invariant_state() {
    let csa = CsaOperators::<f64>::pauli_z(1);
    let h = parse("# family: pauli\n1 : x1\n");
    let s = csa_polynomial_split(&h, &csa).unwrap();
    assert!(s.states.is_empty());
    assert_eq!(s.remainder, h);
    assert!(s.csa_part.is_zero());
}

#[test]
fn split_partially_solvable_example() {
    let csa = CsaOperators::<f64>::occupations(Family::Fermionic, 4).unwrap();
    let h = partially_solvable_hamiltonian::<f64>().unwrap();
    let s = csa_polynomial_split(&h, &csa).unwrap();
    let n1 = ProjectorSpec::Fixed(vec![(0, 1.0)]);
    let tuples = csa.tuples().unwrap();
    // every n_1 = 1 state, plus the empty and the filled 2-3-4 states, which are one-dimensional
    // sectors of the n_1 = 0 block
    let mut expected: Vec<usize> = (0..16).filter(|&j| n1.contains(&tuples[j])).collect();
    expected.extend([0b0000, 0b1110]);
    expected.sort_unstable();
    assert_eq!(s.states, expected);
    assert!(!s.remainder.is_zero());
}

#[test]
fn qubit_reduce_two_qubit_example() {
    let h = two_qubit_class2_hamiltonian::<f64>().unwrap();
    let plus = qubit_reduce(&h, 1, Branch::Plus).unwrap();
    let minus = qubit_reduce(&h, 1, Branch::Minus).unwrap();
    assert!(plus.approx_eq(&parse("# family: pauli\n# modes: 2\n1 : x2\n1 : y2\n"), 1e-12));
    assert!(minus.approx_eq(&parse("# family: pauli\n# modes: 2\n1 : x2\n-1 : y2\n"), 1e-12));
}

#[test]
fn qubit_reduce_without_commuting_operator() {
    // exhaustive check on qubit 1: no n . sigma_1 commutes with z1 z2 + x1
    let h = parse("# family: pauli\n1 : z1 z2\n1 : x1\n");
    assert!(matches!(qubit_reduce(&h, 1, Branch::Plus), Err(Error::NoCommutingQubitOperator(1))));
    // z2 commutes, so qubit 2 reduces
    let r = qubit_reduce(&h, 2, Branch::Minus).unwrap();
    assert!(r.approx_eq(&parse("# family: pauli\n# modes: 2\n-1 : z1\n1 : x1\n"), 1e-12));
}

#[test]
fn qubit_reduce_spectrum_matches_sector() {
    let h = parse("# family: pauli\n0.7 : x1 x3\n-0.4 : z2\n1.1 : z2 y3\n0.3 : x1 z2\n");
    for branch in [Branch::Plus, Branch::Minus] {
        let r = qubit_reduce(&h, 2, branch).unwrap();
        let full = to_matrix(&h, 3).unwrap().matrix;
        // qubit 2 is bit 1; z2 = +1 on bit 0
        let want_set = branch == Branch::Minus;
        let idx: Vec<usize> = (0..8).filter(|j| (j >> 1 & 1 == 1) == want_set).collect();
        let block = nalgebra::DMatrix::from_fn(4, 4, |a, b| full[(idx[a], idx[b])]);
        let mut sector = mfsolve::rep::hermitian_eigen(&block).values;
        let reduced = exact_eigensystem(&to_matrix(&r, 3).unwrap()).unwrap().values;
        // the reduced operator acts trivially on qubit 2, so each value appears twice
        let mut halved: Vec<f64> = reduced.iter().step_by(2).copied().collect();
        sector.sort_by(|a, b| a.partial_cmp(b).unwrap());
        halved.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in sector.iter().zip(&halved) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn classify_class1_fixture() {
    let h = class1_fixture::<f64>().unwrap().build().unwrap();
    let report = classify(&h, u(3), &DetectorOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Class(1));
    assert!(report.certificate.certified);
    assert!(report.certificate.reconstruction_error.unwrap() <= 1e-8 * report.certificate.norm);
}

#[test]
fn classify_class2_fixture() {
    let h = class2_fixture::<f64>().unwrap().build().unwrap();
    let report = classify(&h, u(3), &DetectorOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Class(2));
    assert!(report.certificate.certified);
    assert_eq!(report.mf_count(), 8);
}

#[test]
fn classify_two_qubit_example() {
    let h = two_qubit_class2_hamiltonian::<f64>().unwrap();
    let report = classify(&h, su2(2), &DetectorOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Class(2));
    assert!(report.certificate.certified);
    assert_eq!(report.levels[0].states.len(), 2);
}

#[test]
fn classify_three_qubit_class3() {
    let spec = three_qubit_class3_spec::<f64>().unwrap();
    let h = build_class_k(&spec).unwrap();
    let report = classify(&h, su2(3), &DetectorOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Class(3));
    assert!(report.certificate.certified);
}

#[test]
fn classify_pair_hop_is_partial() {
    let h = parse("# modes: 4\n1 : 4^ 3^ 2 1\n1 : 2^ 1^ 4 3\n");
    let report = classify(&h, u(4), &DetectorOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Partial { mf: 14, dim: 16 });
}

#[test]
fn classify_entangled_spectrum_is_not_mf() {
    let h = parse("# family: pauli\n1 : x1 x2\n0.5 : y1 y2\n0.2 : z1 z2\n");
    let report = classify(&h, su2(2), &DetectorOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::NotMfSolvable { optimizer_limited: true });
    assert!(!report.oracle_override);
    assert!(report.eigenstates.iter().all(|e| !e.is_mf));
}

#[test]
fn classify_partially_solvable_example() {
    // Every state of the n_1 = 0 block lives in three orbitals, where all fixed-number states
    // are Slater determinants, so the detector certifies a full class decomposition.
    let h = partially_solvable_hamiltonian::<f64>().unwrap();
    let report = classify(&h, u(4), &DetectorOptions::default()).unwrap();
    assert!(matches!(report.verdict, Verdict::Class(_)), "{:?}", report.verdict);
    assert!(report.certificate.certified);
    assert_eq!(report.mf_count(), 16);
}

#[test]
fn classify_rejects_non_hermitian() {
    let h = parse("# modes: 2\n1 : 2^ 1\n");
    assert!(matches!(classify(&h, u(2), &DetectorOptions::default()), Err(Error::NotHermitian(_))));
}
