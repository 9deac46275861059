use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix3};

use crate::error::{Error, Result};
use crate::ops::{Axis, Factor, Family, OpString, OperatorPolynomial};
use crate::scalar::{cre, lit, Real};

/// Which eigenstate of the commuting single-qubit operator to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }
}

/// Unit vector n with [n . sigma_k, H] = 0. The coordinate axes are preferred in the order
/// z, x, y; otherwise any direction in the null space is returned.
pub fn commuting_axis<T: Real>(h: &OperatorPolynomial<T>, qubit: usize) -> Result<[T; 3]> {
    if h.family() != Family::Pauli {
        return Err(Error::FamilyMismatch {
            left: Family::Pauli,
            right: h.family(),
        });
    }
    if qubit == 0 || qubit > h.modes() {
        return Err(Error::IndexOutOfRange {
            family: Family::Pauli,
            index: qubit,
            modes: h.modes(),
        });
    }
    let comms = Axis::ALL
        .iter()
        .map(|&a| OperatorPolynomial::pauli(h.modes(), qubit, a).commutator(h))
        .collect::<Result<Vec<_>>>()?;
    let scale = h.max_abs_coefficient().max(T::one());
    let tol = scale * lit(1e-10);
    for axis in [2usize, 0, 1] {
        if comms[axis].max_abs_coefficient() <= tol {
            let mut n = [T::zero(); 3];
            n[axis] = T::one();
            return Ok(n);
        }
    }
    // rows indexed by (string, re/im), one column per axis
    let mut rows: BTreeMap<(OpString, bool), [T; 3]> = BTreeMap::new();
    for (a, c) in comms.iter().enumerate() {
        for (s, z) in c.terms() {
            rows.entry((s.clone(), false)).or_insert([T::zero(); 3])[a] = z.re;
            rows.entry((s.clone(), true)).or_insert([T::zero(); 3])[a] = z.im;
        }
    }
    let m = DMatrix::from_fn(rows.len(), 3, |r, c| rows.values().nth(r).expect("row")[c]);
    let gram: Matrix3<T> = Matrix3::from_fn(|r, c| m.column(r).dot(&m.column(c)));
    let eig = gram.symmetric_eigen();
    let (k, &smallest) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
        .expect("three eigenvalues");
    if smallest.abs().sqrt() > tol {
        return Err(Error::NoCommutingQubitOperator(qubit));
    }
    let v = eig.eigenvectors.column(k);
    Ok([v[0], v[1], v[2]])
}

/// Partial expectation of H over the chosen eigenstate of the single-qubit operator n . sigma_k
/// that commutes with H. The result has no factors on qubit k and keeps the other indices.
pub fn qubit_reduce<T: Real>(
    h: &OperatorPolynomial<T>,
    qubit: usize,
    branch: Branch,
) -> Result<OperatorPolynomial<T>> {
    let n = commuting_axis(h, qubit)?;
    let sign: T = branch.sign();
    let mut out = OperatorPolynomial::zero(Family::Pauli, h.modes());
    for (s, c) in h.terms() {
        let mut rest: Vec<Factor> = Vec::with_capacity(s.len());
        let mut weight = T::one();
        for f in s.factors() {
            match *f {
                Factor::Pauli { qubit: q, axis } if q == qubit => {
                    let b = match axis {
                        Axis::X => 0,
                        Axis::Y => 1,
                        Axis::Z => 2,
                    };
                    // <sigma_b> = +/- n_b on the +/- 1 eigenstate of n . sigma
                    weight = sign * n[b];
                }
                other => rest.push(other),
            }
        }
        out.add_word(&rest, *c * cre(weight))?;
    }
    Ok(out)
}
