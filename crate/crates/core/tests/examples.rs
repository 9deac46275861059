use std::sync::Arc;

use mfsolve::builder::fixtures::{class1_fixture, class2_fixture, partially_solvable_hamiltonian};
use mfsolve::group::{
    bogoliubov_generators, matrix_distance, maximal_tori_diagonalize, orbital_rotation, BogoliubovTransform,
    ToriOptions,
};
use mfsolve::ops::text::parse_polynomial;
use mfsolve::ops::{jordan_wigner, ladder_set, AlgebraBasis, Family, OperatorPolynomial};
use mfsolve::rep::{exact_eigensystem, mf_state_check, to_matrix, variance};
use mfsolve::{Cplx, Polynomial};
use nalgebra::{DMatrix, DVector};

fn parse(src: &str) -> Polynomial {
    parse_polynomial(src, None, None).unwrap()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Dense a_p on N modes built bit by bit: bit p-1 is mode p, set means occupied, and the sign
/// counts the occupied modes below p.
fn annihilator_oracle(modes: usize, p: usize) -> DMatrix<Cplx<f64>> {
    let dim = 1 << modes;
    let mut m = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        if j >> (p - 1) & 1 == 1 {
            let below = (j & ((1 << (p - 1)) - 1)).count_ones();
            let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
            m[(j ^ (1 << (p - 1)), j)] = Cplx::new(sign, 0.0);
        }
    }
    m
}

#[test]
fn ladder_matrices_match_oracle() {
    for p in 1..=3 {
        let a = to_matrix(&OperatorPolynomial::<f64>::annihilate(3, p), 3).unwrap().matrix;
        assert_eq!(a, annihilator_oracle(3, p));
        let ad = to_matrix(&OperatorPolynomial::<f64>::create(3, p), 3).unwrap().matrix;
        assert_eq!(ad, annihilator_oracle(3, p).adjoint());
    }
}

#[test]
fn number_product_agrees_with_matrix_product() {
    let n1 = OperatorPolynomial::<f64>::number(2, 1);
    let n2 = OperatorPolynomial::<f64>::number(2, 2);
    let prod = n2.multiply(&n1).unwrap();
    assert!(prod.approx_eq(&parse("# modes: 2\n-1 : 2^ 1^ 2 1\n"), 1e-15));
    let a1 = annihilator_oracle(2, 1);
    let a2 = annihilator_oracle(2, 2);
    let oracle = a2.adjoint() * &a2 * a1.adjoint() * &a1;
    assert_eq!(to_matrix(&prod, 2).unwrap().matrix, oracle);
}

#[test]
fn appendix_hamiltonians_are_hermitian() {
    assert!(class1_fixture::<f64>().unwrap().build().unwrap().is_hermitian());
    assert!(class2_fixture::<f64>().unwrap().build().unwrap().is_hermitian());
    assert!(partially_solvable_hamiltonian::<f64>().unwrap().is_hermitian());
}

#[test]
fn class1_spectrum_is_invariant_under_jordan_wigner() {
    let h = class1_fixture::<f64>().unwrap().build().unwrap();
    let a = exact_eigensystem(&to_matrix(&h, 3).unwrap()).unwrap().values;
    let b = exact_eigensystem(&to_matrix(&jordan_wigner(&h).unwrap(), 3).unwrap()).unwrap().values;
    // F over the 8 occupations: zero, one electron -> 0, pairs -> -27, -9, -9, all -> -45
    let want = [-45.0, -27.0, -9.0, -9.0, 0.0, 0.0, 0.0, 0.0];
    for ((x, y), w) in sorted(a).iter().zip(sorted(b)).zip(want) {
        assert!((x - y).abs() < 1e-10);
        assert!((x - w).abs() < 1e-8);
    }
}

#[test]
fn two_qubit_spectrum() {
    let h = parse("# family: pauli\n1 : x2\n1 : z1 y2\n");
    let values = sorted(exact_eigensystem(&to_matrix(&h, 2).unwrap()).unwrap().values);
    let r = 2f64.sqrt();
    for (v, w) in values.iter().zip([-r, -r, r, r]) {
        assert!((v - w).abs() < 1e-12);
    }
}

#[test]
fn reference_state_of_partial_example_has_variance() {
    let h = partially_solvable_hamiltonian::<f64>().unwrap();
    let m = to_matrix(&h, 4).unwrap().matrix;
    // |0110>: modes 2 and 3 occupied
    let mut psi = DVector::zeros(16);
    psi[0b0110] = Cplx::new(1.0, 0.0);
    assert!(variance(&m, &psi).unwrap() > 1e-3);
}

#[test]
fn class2_eigenvectors_are_slater() {
    let h = class2_fixture::<f64>().unwrap().build().unwrap();
    let eig = exact_eigensystem(&to_matrix(&h, 3).unwrap()).unwrap();
    // the spectrum is non-degenerate, so each eigenvector is fixed up to phase
    assert_eq!(eig.degeneracy_groups().len(), 8);
    for k in 0..8 {
        let check = mf_state_check(&eig.vector(k), Family::Fermionic, 3).unwrap();
        assert!(check.is_mf && check.defect <= 1e-8, "{k}: {}", check.defect);
    }
}

#[test]
fn number_operator_is_rotation_invariant() {
    let total = (1..=3).fold(OperatorPolynomial::<f64>::zero(Family::Fermionic, 3), |acc, p| {
        acc.try_add(&OperatorPolynomial::number(3, p)).unwrap()
    });
    let basis = AlgebraBasis::<f64>::unitary(3);
    for g in basis.generators() {
        assert!(g.commutator(&total).unwrap().is_zero());
    }
    let r = orbital_rotation(3, &[(1, 2, 0.7, -0.3), (2, 3, 1.9, 0.4), (1, 3, -2.2, 1.1)]).unwrap();
    assert!(r.apply(&total).unwrap().approx_eq(&total, 1e-12));
}

#[test]
fn pair_annihilators_lower_two_occupations() {
    let n = 3;
    for p in 1..=n {
        for q in (p + 1)..=n {
            let pair = OperatorPolynomial::<f64>::annihilate(n, p).multiply(&OperatorPolynomial::annihilate(n, q)).unwrap();
            for r in 1..=n {
                let shift = if r == p || r == q { -1.0 } else { 0.0 };
                let c = OperatorPolynomial::number(n, r).commutator(&pair).unwrap();
                assert!(c.approx_eq(&pair.scale_real(shift), 1e-14));
            }
        }
    }
    // so(4): the four roots are (+-1, +-1) against the hermitian CSA
    let so = AlgebraBasis::<f64>::orthogonal_even(2).in_family(Family::Fermionic).unwrap();
    let set = ladder_set(&so).unwrap();
    assert_eq!(set.len(), 2);
    assert!(set.defect().unwrap() < 1e-10);
    for root in &set.roots {
        assert!(root.iter().all(|a| (a.abs() - 1.0).abs() < 1e-10), "{root:?}");
    }
}

#[test]
fn trivial_bogoliubov_is_the_annihilator() {
    let n = 2;
    let t = BogoliubovTransform::<f64>::new(DMatrix::identity(n, n), DMatrix::zeros(n, n)).unwrap();
    let ops = bogoliubov_generators(&t).unwrap();
    for p in 1..=n {
        assert!(ops.annihilators[p - 1].approx_eq(&OperatorPolynomial::annihilate(n, p), 1e-15));
    }
    assert!(ops.car_defect().unwrap() < 1e-15);
}

#[test]
fn tori_on_csa_element_is_identity() {
    let basis = Arc::new(AlgebraBasis::<f64>::unitary(3));
    let coords = DVector::from_vec(vec![0.3, -1.2, 0.8, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let x = basis.element(&coords);
    let out = maximal_tori_diagonalize(&x, basis.clone(), &ToriOptions::default()).unwrap();
    assert!(out.rotation.angles().iter().all(|t| *t == 0.0));
    assert_eq!(out.csa_coefficients, vec![0.3, -1.2, 0.8]);
    assert_eq!(out.restarts, 1);
}

#[test]
fn orbital_rotation_matrix_is_unitary_on_fock_space() {
    let r = orbital_rotation(3, &[(1, 2, 0.4, 0.2), (2, 3, -1.0, 0.5)]).unwrap();
    let u = mfsolve::group::rotation_matrix(&r, 3).unwrap();
    assert!(matrix_distance(&(&u * u.adjoint()), &DMatrix::identity(8, 8)) < 1e-12);
}
