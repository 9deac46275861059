//! Construction, classification and exact verification of mean-field-solvable Hamiltonians.
//!
//! Hamiltonians are polynomials in fermionic, Majorana or Pauli operators. A Hamiltonian is
//! mean-field (MF) solvable when every eigenstate is reached from a Cartan-subalgebra eigenstate
//! by a unitary generated from a Lie algebra of one-body-like operators. The crate builds such
//! Hamiltonians from their recursive class-K form, detects the form in a given Hamiltonian by
//! variance minimization, and checks every claim against exact diagonalization.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases at the crate root
//! fix the scalar to `f64`.

mod error;
mod scalar;

pub mod builder;
pub mod detector;
pub mod group;
pub mod ops;
pub mod optim;
pub mod rep;
pub mod serial;

pub use error::{Error, ErrorCategory, Result};
pub use scalar::{Cplx, Real, COEFF_TOL};

pub type Polynomial = ops::OperatorPolynomial<f64>;
pub type Basis = ops::AlgebraBasis<f64>;
pub type Ladders = ops::LadderSet<f64>;
