use nalgebra::DMatrix;

use super::search::spectral_norm;
use crate::builder::{CsaOperators, CsaPolynomial, ProjectorSpec};
use crate::error::Result;
use crate::ops::OperatorPolynomial;
use crate::rep::to_matrix;
use crate::scalar::{cabs, lit, Cplx, Real};

/// A transformed Hamiltonian separated into its CSA part and the rest.
#[derive(Clone, Debug)]
pub struct CsaSplit<T: Real> {
    /// Terms that are functions of the CSA alone.
    pub csa_part: OperatorPolynomial<T>,
    pub remainder: OperatorPolynomial<T>,
    /// Basis states that are exact eigenvectors.
    pub states: Vec<usize>,
    /// P_1 over those states.
    pub projector: ProjectorSpec<T>,
    /// F_1 with F_1(C_J) = <J|H|J> on P_1 and zero elsewhere.
    pub function: CsaPolynomial<T>,
}

/// Splits H into CSA terms and the rest and finds the basis states that H leaves invariant
/// (column residual at most 1e-8 ||H||).
pub fn csa_polynomial_split<T: Real>(
    h: &OperatorPolynomial<T>,
    csa: &CsaOperators<T>,
) -> Result<CsaSplit<T>> {
    let (csa_part, remainder) = h.split_diagonal();
    let m = to_matrix(h, csa.modes())?.matrix;
    let norm = spectral_norm(&m);
    let states = invariant_states(&m, lit::<T>(1e-8) * norm);
    let tuples = csa.tuples()?;
    let values: Vec<(Vec<T>, T)> = states.iter().map(|&j| (tuples[j].clone(), m[(j, j)].re)).collect();
    Ok(CsaSplit {
        csa_part,
        remainder,
        projector: ProjectorSpec::Tuples(values.iter().map(|v| v.0.clone()).collect()),
        function: CsaPolynomial::interpolate(csa, &values)?,
        states,
    })
}

pub(crate) fn invariant_states<T: Real>(m: &DMatrix<Cplx<T>>, tol: T) -> Vec<usize> {
    (0..m.ncols())
        .filter(|&j| {
            let off: T = (0..m.nrows())
                .filter(|&r| r != j)
                .map(|r| {
                    let a = cabs(m[(r, j)]);
                    a * a
                })
                .fold(T::zero(), |s, x| s + x);
            off.sqrt() <= tol
        })
        .collect()
}
