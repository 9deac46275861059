//! Reference Hamiltonians: the class-1 and class-2 three-orbital examples, the partially
//! solvable four-orbital example and the two-qubit class-2 example.

use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use super::csa::{CsaOperators, CsaPolynomial};
use super::spec::{build_class_k, ClassLevel, ClassSpec, ProjectorSpec};
use crate::error::Result;
use crate::group::{orbital_rotation_in, MfRotation};
use crate::ops::text::parse_polynomial;
use crate::ops::{AlgebraBasis, Family, OperatorPolynomial};
use crate::scalar::{lit, Real};

/// Inputs of a construction together with the Hamiltonian printed for them.
#[derive(Clone, Debug)]
pub struct Fixture<T: Real> {
    pub name: &'static str,
    pub spec: ClassSpec<T>,
    /// Coefficients as printed, like terms merged.
    pub expected: OperatorPolynomial<T>,
    /// Absolute tolerance matching the printed precision.
    pub tolerance: T,
}

impl<T: Real> Fixture<T> {
    pub fn build(&self) -> Result<OperatorPolynomial<T>> {
        build_class_k(&self.spec)
    }
}

pub const CLASS1_ANGLES: [f64; 3] = [-2.214, -1.459, -2.214];
pub const CLASS1_PAIR_COUPLINGS: [f64; 3] = [-27.0, -9.0, -9.0];

const CLASS1_PRINTED: &str = "# family: fermionic
# modes: 3
11 : 2^ 1^ 2 1
4 : 2^ 1^ 3 1
4 : 2^ 1^ 3 2
4 : 3^ 1^ 2 1
17 : 3^ 1^ 3 1
8 : 3^ 1^ 3 2
4 : 3^ 2^ 2 1
8 : 3^ 2^ 3 1
17 : 3^ 2^ 3 2
";

/// F = sum d_kl n_k n_l with (d12, d13, d23) = (-27, -9, -9), no linear terms, and the orbital
/// rotation with angles (theta12, theta13, theta23) = (-2.214, -1.459, -2.214), phi = 0.
///
/// The printed coefficients correspond to U F U^dag; since the builder forms U^dag F U the
/// stored rotation is the inverse of the one the angles define.
pub fn class1_fixture<T: Real>() -> Result<Fixture<T>> {
    let basis = Arc::new(AlgebraBasis::unitary(3));
    let [t12, t13, t23] = CLASS1_ANGLES.map(lit::<T>);
    let rotation = orbital_rotation_in(
        basis,
        &[(1, 2, t12, T::zero()), (1, 3, t13, T::zero()), (2, 3, t23, T::zero())],
    )?
    .inverse();
    let [d12, d13, d23] = CLASS1_PAIR_COUPLINGS.map(lit::<T>);
    let function = CsaPolynomial::quadratic(&[(0, 1, d12), (0, 2, d13), (1, 2, d23)]);
    Ok(Fixture {
        name: "class1",
        spec: ClassSpec {
            csa: CsaOperators::occupations(Family::Fermionic, 3)?,
            levels: vec![ClassLevel {
                function,
                rotation,
                projector: None,
            }],
        },
        expected: parse_polynomial(CLASS1_PRINTED, None, None)?,
        tolerance: lit(0.05),
    })
}

pub const CLASS2_F1: [f64; 3] = [0.44, 0.61, 0.95];
pub const CLASS2_F2: [f64; 3] = [0.34, 0.69, 0.23];
/// Generator angle of kappa(2,3) in U_2: twice the printed orbital mixing angle 1.55.
pub const CLASS2_KAPPA23_ANGLE: f64 = 3.10;

const CLASS2_PRINTED: &str = "# family: fermionic
# modes: 3
-0.61 : 2^ 1^ 2 1
-0.95 : 3^ 1^ 3 1
0.23 : 2^ 1^ 2 1
0.01 : 2^ 1^ 3 1
0.23 : 2^ 2
0.01 : 2^ 3
0.01 : 3^ 1^ 2 1
0.69 : 3^ 1^ 3 1
0.01 : 3^ 2
0.69 : 3^ 3
";

/// U_1 = I, P_1 = {n_1 = 1}, U_2 = exp(3.10 kappa_23), linear F_1 and F_2.
pub fn class2_fixture<T: Real>() -> Result<Fixture<T>> {
    let basis = Arc::new(AlgebraBasis::unitary(3));
    let u2 = orbital_rotation_in(basis.clone(), &[(2, 3, lit(CLASS2_KAPPA23_ANGLE), T::zero())])?;
    Ok(Fixture {
        name: "class2",
        spec: ClassSpec {
            csa: CsaOperators::occupations(Family::Fermionic, 3)?,
            levels: vec![
                ClassLevel {
                    function: CsaPolynomial::linear(&CLASS2_F1.map(lit::<T>)),
                    rotation: MfRotation::identity(basis),
                    projector: Some(ProjectorSpec::Fixed(vec![(0, T::one())])),
                },
                ClassLevel {
                    function: CsaPolynomial::linear(&CLASS2_F2.map(lit::<T>)),
                    rotation: u2,
                    projector: None,
                },
            ],
        },
        expected: parse_polynomial(CLASS2_PRINTED, None, None)?,
        tolerance: lit(0.01),
    })
}

pub fn appendix_c_fixtures<T: Real>() -> Result<Vec<Fixture<T>>> {
    Ok(vec![class1_fixture()?, class2_fixture()?])
}

/// The non-mean-field block of the partially solvable example, term by term as printed.
pub const NON_MF_BLOCK: &str = "# family: fermionic
# modes: 4
0.43 : 2^ 2
0.15 : 2^ 3
0.81 : 2^ 4
0.64 : 3^ 2
-0.15 : 3^ 2^ 3 2
0.54 : 3^ 2^ 4 2
-0.86 : 3^ 2^ 4 3
0.89 : 3^ 3
0.21 : 3^ 4
0.66 : 4^ 2
0.51 : 4^ 2^ 3 2
0.76 : 4^ 2^ 4 2
0.05 : 4^ 2^ 4 3
0.45 : 4^ 3
1.18 : 4^ 3^ 3 2
0.25 : 4^ 3^ 4 2
-0.16 : 4^ 3^ 4 3
0.68 : 4^ 4
";

pub fn non_mf_block<T: Real>() -> Result<OperatorPolynomial<T>> {
    parse_polynomial(NON_MF_BLOCK, None, None)
}

/// H = n_1 + B (1 - n_1) with B the hermitian part of the printed block (the printed block is
/// not hermitian).
pub fn partially_solvable_hamiltonian<T: Real>() -> Result<OperatorPolynomial<T>> {
    let block = non_mf_block::<T>()?.hermitian_part();
    let n1 = OperatorPolynomial::number(4, 1);
    let complement = OperatorPolynomial::identity(Family::Fermionic, 4).try_sub(&n1)?;
    n1.try_add(&block.multiply(&complement)?)
}

/// x_2 + y_2 z_1.
pub fn two_qubit_class2_hamiltonian<T: Real>() -> Result<OperatorPolynomial<T>> {
    parse_polynomial("# family: pauli\n# modes: 2\n1 : x2\n1 : z1 y2\n", None, None)
}

/// x_2 + y_2 z_1 as a class-2 specification: on z_1 = +1 qubit 2 is quantized along x + y,
/// on z_1 = -1 along x - y; both levels have F = sqrt(2) z_2.
pub fn two_qubit_class2_spec<T: Real>() -> Result<ClassSpec<T>> {
    let basis = Arc::new(AlgebraBasis::su2_sum(2));
    let quarter: T = lit(FRAC_PI_4);
    let eighth: T = lit(FRAC_PI_4 / 2.0);
    // z -> x (quarter turn about y), then x -> (x + y)/sqrt 2 (eighth turn about z)
    let u1 = MfRotation::from_labels(basis.clone(), &[("iy(2)", quarter), ("iz(2)", eighth)])?;
    // z -> y (quarter turn about x), which U_1 carries on to (x - y)/sqrt 2
    let u2 = MfRotation::from_labels(basis, &[("ix(2)", quarter)])?;
    let f = CsaPolynomial::linear(&[T::zero(), lit(std::f64::consts::SQRT_2)]);
    Ok(ClassSpec {
        csa: CsaOperators::pauli_z(2),
        levels: vec![
            ClassLevel {
                function: f.clone(),
                rotation: u1,
                projector: Some(ProjectorSpec::Fixed(vec![(0, T::one())])),
            },
            ClassLevel {
                function: f,
                rotation: u2,
                projector: None,
            },
        ],
    })
}

/// A class-3 three-qubit Hamiltonian: qubit 1 selects the level, qubit 2 picks the axes of
/// qubit 3 within z_1 = -1.
pub fn three_qubit_class3_spec<T: Real>() -> Result<ClassSpec<T>> {
    let basis = Arc::new(AlgebraBasis::su2_sum(3));
    let l = |x: f64| lit::<T>(x);
    let u1 = MfRotation::from_labels(basis.clone(), &[("iy(2)", l(0.3)), ("iy(3)", l(0.5))])?;
    let u2 = MfRotation::from_labels(basis.clone(), &[("ix(2)", l(0.4)), ("iy(3)", l(-0.2))])?;
    let u3 = MfRotation::from_labels(basis, &[("ix(3)", l(0.7))])?;
    let mut f1 = CsaPolynomial::linear(&[l(0.0), l(1.1), l(0.45)]);
    f1.add_term(&[], l(0.2));
    let mut f2 = CsaPolynomial::linear(&[l(0.0), l(0.0), l(0.35)]);
    f2.add_term(&[], l(-0.6));
    let mut f3 = CsaPolynomial::linear(&[l(0.0), l(0.0), l(0.8)]);
    f3.add_term(&[], l(0.05));
    Ok(ClassSpec {
        csa: CsaOperators::pauli_z(3),
        levels: vec![
            ClassLevel {
                function: f1,
                rotation: u1,
                projector: Some(ProjectorSpec::Fixed(vec![(0, T::one())])),
            },
            ClassLevel {
                function: f2,
                rotation: u2,
                projector: Some(ProjectorSpec::Fixed(vec![(0, -T::one()), (1, T::one())])),
            },
            ClassLevel {
                function: f3,
                rotation: u3,
                projector: None,
            },
        ],
    })
}
