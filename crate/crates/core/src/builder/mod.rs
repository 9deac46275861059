//! Hamiltonians of class K built from CSA functions, projectors and mean-field rotations.

mod csa;
pub mod fixtures;
mod spec;

pub use csa::{lowdin_polynomial, lowdin_projector, CsaDisplay, CsaOperators, CsaPolynomial};
pub use spec::{
    build_class1, build_class2, build_class_k, ClassLevel, ClassSpec, ProjectorSpec, SpecEigenstate,
    COMMUTATION_TOL,
};
