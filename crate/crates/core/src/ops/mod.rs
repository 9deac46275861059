//! Symbolic operator algebra for fermionic, Majorana and Pauli operators.

mod algebra;
mod ladder;
mod poly;
mod string;
pub mod text;
mod transform;

pub use algebra::{AlgebraBasis, DEFAULT_CLOSURE_CAP};
pub use ladder::{ladder_set, LadderSet};
pub use poly::{adjoint, commutator, is_antihermitian, is_hermitian, multiply, OperatorPolynomial};
pub use string::{Axis, Factor, Family, OpString};
pub use transform::{fermionic_from_majorana, jordan_wigner, majorana_from_fermionic};
