//! Linear substitutions between the operator families.

use num_traits::One;

use super::poly::OperatorPolynomial;
use super::string::{Axis, Factor, Family};
use crate::error::{Error, Result};
use crate::scalar::{cim, cre, lit, Cplx, Real};

fn require<T: Real>(p: &OperatorPolynomial<T>, family: Family) -> Result<()> {
    if p.family() != family {
        return Err(Error::FamilyMismatch {
            left: family,
            right: p.family(),
        });
    }
    Ok(())
}

/// Rewrites a fermionic polynomial with a_p = (g_{2p} - i g_{2p-1})/2 and
/// a_p^dag = (g_{2p} + i g_{2p-1})/2.
pub fn majorana_from_fermionic<T: Real>(p: &OperatorPolynomial<T>) -> Result<OperatorPolynomial<T>> {
    require(p, Family::Fermionic)?;
    let n = p.modes();
    let half: T = lit(0.5);
    p.substitute(Family::Majorana, n, |f| {
        let &Factor::Fermion { mode, dagger } = f else {
            unreachable!("fermionic polynomial")
        };
        let sign = if dagger { half } else { -half };
        let mut out = OperatorPolynomial::zero(Family::Majorana, n);
        out.add_word(&[Factor::Majorana(2 * mode)], cre(half))?;
        out.add_word(&[Factor::Majorana(2 * mode - 1)], cim(sign))?;
        Ok(out)
    })
}

/// Inverse of [`majorana_from_fermionic`]: g_{2p-1} = i(a_p - a_p^dag), g_{2p} = a_p + a_p^dag.
pub fn fermionic_from_majorana<T: Real>(p: &OperatorPolynomial<T>) -> Result<OperatorPolynomial<T>> {
    require(p, Family::Majorana)?;
    let n = p.modes();
    p.substitute(Family::Fermionic, n, |f| {
        let &Factor::Majorana(j) = f else {
            unreachable!("majorana polynomial")
        };
        let mode = j.div_ceil(2);
        let mut out = OperatorPolynomial::zero(Family::Fermionic, n);
        if j % 2 == 1 {
            out.add_word(&[Factor::annihilate(mode)], cim(T::one()))?;
            out.add_word(&[Factor::create(mode)], cim(-T::one()))?;
        } else {
            out.add_word(&[Factor::annihilate(mode)], Cplx::one())?;
            out.add_word(&[Factor::create(mode)], Cplx::one())?;
        }
        Ok(out)
    })
}

/// Jordan-Wigner map a_p -> (x_p + i y_p)/2 z_{p-1} ... z_1, a_p^dag -> (x_p - i y_p)/2 z_{p-1} ... z_1.
///
/// The sign of the `y` term follows from labelling an occupied mode by the z = -1 state, which
/// makes the fermionic and qubit matrices of a polynomial identical. Majorana input is first
/// rewritten in fermionic form.
pub fn jordan_wigner<T: Real>(p: &OperatorPolynomial<T>) -> Result<OperatorPolynomial<T>> {
    let fermionic;
    let p = match p.family() {
        Family::Fermionic => p,
        Family::Majorana => {
            fermionic = fermionic_from_majorana(p)?;
            &fermionic
        }
        Family::Pauli => {
            return Err(Error::FamilyMismatch {
                left: Family::Fermionic,
                right: Family::Pauli,
            })
        }
    };
    let n = p.modes();
    let half: T = lit(0.5);
    p.substitute(Family::Pauli, n, |f| {
        let &Factor::Fermion { mode, dagger } = f else {
            unreachable!("fermionic polynomial")
        };
        let string: Vec<Factor> = (1..mode)
            .map(|q| Factor::Pauli { qubit: q, axis: Axis::Z })
            .collect();
        let mut out = OperatorPolynomial::zero(Family::Pauli, n);
        let mut word = string.clone();
        word.push(Factor::Pauli { qubit: mode, axis: Axis::X });
        out.add_word(&word, cre(half))?;
        let mut word = string;
        word.push(Factor::Pauli { qubit: mode, axis: Axis::Y });
        let sign = if dagger { -half } else { half };
        out.add_word(&word, cim(sign))?;
        Ok(out)
    })
}
