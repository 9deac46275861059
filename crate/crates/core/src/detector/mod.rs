//! Classification of Hamiltonians by variance minimization, certified by exact
//! diagonalization.

mod classify;
mod qubit;
mod search;
mod split;

pub use classify::{
    classify, Certificate, ClassificationReport, DetectorOptions, EigenRecord, LevelReport, Verdict,
    RECONSTRUCTION_TOL,
};
pub use qubit::{commuting_axis, qubit_reduce, Branch};
pub use search::{minimize_variance, VarianceMinimum};
pub use split::{csa_polynomial_split, CsaSplit};
