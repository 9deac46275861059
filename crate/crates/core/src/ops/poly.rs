use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::string::{adjoint_string, canonicalize, Axis, Factor, Family, OpString};
use crate::error::{Error, Result};
use crate::scalar::{cabs, cim, cre, lit, Cplx, Real, COEFF_TOL};

/// Weighted sum of canonical operator strings of a single family on `modes` modes.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPolynomial<T: Real> {
    family: Family,
    modes: usize,
    terms: BTreeMap<OpString, Cplx<T>>,
}

impl<T: Real> OperatorPolynomial<T> {
    pub fn zero(family: Family, modes: usize) -> Self {
        OperatorPolynomial {
            family,
            modes,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(family: Family, modes: usize) -> Self {
        Self::constant(family, modes, Cplx::one())
    }

    pub fn constant(family: Family, modes: usize, c: Cplx<T>) -> Self {
        let mut p = Self::zero(family, modes);
        p.add_canonical(OpString::identity(), c);
        p
    }

    /// Builds `coeff * f_1 f_2 ... f_n` from an arbitrary (not necessarily canonical) word.
    pub fn monomial(family: Family, modes: usize, word: &[Factor], coeff: Cplx<T>) -> Result<Self> {
        let mut p = Self::zero(family, modes);
        p.add_word(word, coeff)?;
        Ok(p)
    }

    pub fn create(modes: usize, p: usize) -> Self {
        Self::monomial(Family::Fermionic, modes, &[Factor::create(p)], Cplx::one())
            .expect("mode index in range")
    }

    pub fn annihilate(modes: usize, p: usize) -> Self {
        Self::monomial(Family::Fermionic, modes, &[Factor::annihilate(p)], Cplx::one())
            .expect("mode index in range")
    }

    /// Occupation operator n_p = a_p^dag a_p.
    pub fn number(modes: usize, p: usize) -> Self {
        Self::excitation(modes, p, p)
    }

    /// Excitation operator E^p_q = a_p^dag a_q.
    pub fn excitation(modes: usize, p: usize, q: usize) -> Self {
        Self::monomial(
            Family::Fermionic,
            modes,
            &[Factor::create(p), Factor::annihilate(q)],
            Cplx::one(),
        )
        .expect("mode index in range")
    }

    pub fn majorana(modes: usize, j: usize) -> Self {
        Self::monomial(Family::Majorana, modes, &[Factor::Majorana(j)], Cplx::one())
            .expect("majorana index in range")
    }

    pub fn pauli(qubits: usize, k: usize, axis: Axis) -> Self {
        Self::monomial(Family::Pauli, qubits, &[Factor::Pauli { qubit: k, axis }], Cplx::one())
            .expect("qubit index in range")
    }

    /// Pauli word from `(qubit, axis)` pairs.
    pub fn pauli_word(qubits: usize, word: &[(usize, Axis)], coeff: Cplx<T>) -> Result<Self> {
        let factors: Vec<Factor> = word
            .iter()
            .map(|&(qubit, axis)| Factor::Pauli { qubit, axis })
            .collect();
        Self::monomial(Family::Pauli, qubits, &factors, coeff)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpString, &Cplx<T>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: &OpString) -> Cplx<T> {
        self.terms.get(s).copied().unwrap_or_else(Cplx::zero)
    }

    /// Coefficient of the canonical form of `word`.
    pub fn coefficient_of(&self, word: &[Factor]) -> Cplx<T> {
        let canon = canonicalize(word.to_vec());
        match canon.as_slice() {
            [(phase, s)] => self.coefficient(s) * phase.to_complex::<T>().conj(),
            _ => Cplx::zero(),
        }
    }

    /// Highest string length.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(OpString::len).max().unwrap_or(0)
    }

    pub fn max_abs_coefficient(&self) -> T {
        self.terms
            .values()
            .map(|c| cabs(*c))
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> T {
        self.terms
            .values()
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
            .sqrt()
    }

    /// Same operator declared on a larger mode count.
    pub fn with_modes(&self, modes: usize) -> Result<Self> {
        let max = self.terms.keys().map(OpString::max_index).max().unwrap_or(0);
        if max > self.family.max_index(modes) {
            return Err(Error::IndexOutOfRange {
                family: self.family,
                index: max,
                modes,
            });
        }
        Ok(OperatorPolynomial {
            family: self.family,
            modes,
            terms: self.terms.clone(),
        })
    }

    pub(crate) fn add_canonical(&mut self, s: OpString, c: Cplx<T>) {
        let tol: T = lit(COEFF_TOL);
        let entry = self.terms.entry(s);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = *o.get() + c;
                if cabs(v) < tol {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                if cabs(c) >= tol {
                    v.insert(c);
                }
            }
        }
    }

    /// Adds `coeff * word` after canonicalizing the word.
    pub fn add_word(&mut self, word: &[Factor], coeff: Cplx<T>) -> Result<()> {
        for f in word {
            if f.family() != self.family {
                return Err(Error::FamilyMismatch {
                    left: self.family,
                    right: f.family(),
                });
            }
            if f.index() == 0 || f.index() > self.family.max_index(self.modes) {
                return Err(Error::IndexOutOfRange {
                    family: self.family,
                    index: f.index(),
                    modes: self.modes,
                });
            }
        }
        for (phase, s) in canonicalize(word.to_vec()) {
            self.add_canonical(s, coeff * phase.to_complex::<T>());
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch {
                left: self.family,
                right: other.family,
            });
        }
        if self.modes != other.modes {
            return Err(Error::ModeMismatch {
                left: self.modes,
                right: other.modes,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_canonical(s.clone(), *c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_canonical(s.clone(), -*c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Cplx<T>) -> Self {
        let mut out = Self::zero(self.family, self.modes);
        for (s, v) in &self.terms {
            out.add_canonical(s.clone(), *v * c);
        }
        out
    }

    pub fn scale_real(&self, x: T) -> Self {
        self.scale(cre(x))
    }

    /// Product in canonical form.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.family, self.modes);
        let mut word = Vec::new();
        for (s1, c1) in &self.terms {
            for (s2, c2) in &other.terms {
                word.clear();
                word.extend_from_slice(s1.factors());
                word.extend_from_slice(s2.factors());
                let c = *c1 * *c2;
                for (phase, s) in canonicalize(word.clone()) {
                    out.add_canonical(s, c * phase.to_complex::<T>());
                }
            }
        }
        Ok(out)
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.try_sub(&other.multiply(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.try_add(&other.multiply(self)?)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.family, self.modes);
        for (s, c) in &self.terms {
            for (phase, t) in adjoint_string(s) {
                out.add_canonical(t, c.conj() * phase.to_complex::<T>());
            }
        }
        out
    }

    /// Largest coefficient of `self - other`.
    pub fn distance(&self, other: &Self) -> T {
        let mut d = T::zero();
        for (s, c) in &self.terms {
            d = d.max(cabs(*c - other.coefficient(s)));
        }
        for (s, c) in &other.terms {
            if !self.terms.contains_key(s) {
                d = d.max(cabs(*c));
            }
        }
        d
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.family == other.family && self.distance(other) <= tol
    }

    pub fn hermiticity_defect(&self) -> T {
        self.distance(&self.adjoint())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= lit(COEFF_TOL * 10.0)
    }

    pub fn is_antihermitian(&self) -> bool {
        self.distance(&self.adjoint().scale(-Cplx::<T>::one())) <= lit(COEFF_TOL * 10.0)
    }

    /// Hermitian part `(p + p^dag)/2`.
    pub fn hermitian_part(&self) -> Self {
        self.try_add(&self.adjoint())
            .expect("same family")
            .scale_real(lit(0.5))
    }

    /// Drops coefficients below `tol`.
    pub fn chop(&self, tol: T) -> Self {
        let mut out = Self::zero(self.family, self.modes);
        for (s, c) in &self.terms {
            if cabs(*c) >= tol {
                out.terms.insert(s.clone(), *c);
            }
        }
        out
    }

    /// Splits into (terms diagonal in the computational basis, the rest).
    pub fn split_diagonal(&self) -> (Self, Self) {
        let mut diag = Self::zero(self.family, self.modes);
        let mut rest = Self::zero(self.family, self.modes);
        for (s, c) in &self.terms {
            if s.is_diagonal() {
                diag.terms.insert(s.clone(), *c);
            } else {
                rest.terms.insert(s.clone(), *c);
            }
        }
        (diag, rest)
    }

    /// Replaces every factor by a polynomial image and multiplies out.
    pub fn substitute<F>(&self, family: Family, modes: usize, mut image: F) -> Result<Self>
    where
        F: FnMut(&Factor) -> Result<Self>,
    {
        let mut cache: BTreeMap<(usize, u8, u8), Self> = BTreeMap::new();
        let mut out = Self::zero(family, modes);
        for (s, c) in &self.terms {
            let mut acc = Self::constant(family, modes, *c);
            for f in s.factors() {
                let key = factor_key(f);
                let img = match cache.get(&key) {
                    Some(p) => p.clone(),
                    None => {
                        let p = image(f)?;
                        cache.insert(key, p.clone());
                        p
                    }
                };
                acc = acc.multiply(&img)?;
            }
            out = out.try_add(&acc)?;
        }
        Ok(out)
    }

    /// Real inner product `Re sum conj(a_s) b_s` of coefficient vectors.
    pub(crate) fn real_dot(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for (s, c) in &self.terms {
            if let Some(d) = other.terms.get(s) {
                acc += c.re * d.re + c.im * d.im;
            }
        }
        acc
    }

    /// Complex inner product `sum conj(a_s) b_s`.
    pub(crate) fn complex_dot(&self, other: &Self) -> Cplx<T> {
        let mut acc = Cplx::zero();
        for (s, c) in &self.terms {
            if let Some(d) = other.terms.get(s) {
                acc += c.conj() * *d;
            }
        }
        acc
    }

    /// `self += c * other` without compatibility checks.
    pub(crate) fn axpy(&mut self, c: Cplx<T>, other: &Self) {
        for (s, v) in &other.terms {
            self.add_canonical(s.clone(), c * *v);
        }
    }

    pub fn i() -> Cplx<T> {
        cim(T::one())
    }
}

fn factor_key(f: &Factor) -> (usize, u8, u8) {
    match *f {
        Factor::Fermion { mode, dagger } => (mode, 0, u8::from(dagger)),
        Factor::Majorana(j) => (j, 1, 0),
        Factor::Pauli { qubit, axis } => (qubit, 2, axis as u8),
    }
}

/// Checked product; the free-function form of [`OperatorPolynomial::multiply`].
pub fn multiply<T: Real>(p: &OperatorPolynomial<T>, q: &OperatorPolynomial<T>) -> Result<OperatorPolynomial<T>> {
    p.multiply(q)
}

pub fn commutator<T: Real>(p: &OperatorPolynomial<T>, q: &OperatorPolynomial<T>) -> Result<OperatorPolynomial<T>> {
    p.commutator(q)
}

pub fn adjoint<T: Real>(p: &OperatorPolynomial<T>) -> OperatorPolynomial<T> {
    p.adjoint()
}

pub fn is_hermitian<T: Real>(p: &OperatorPolynomial<T>) -> bool {
    p.is_hermitian()
}

pub fn is_antihermitian<T: Real>(p: &OperatorPolynomial<T>) -> bool {
    p.is_antihermitian()
}

// Operator sugar. These panic on family or mode mismatch; use the `try_*` methods otherwise.

impl<T: Real> Add for &OperatorPolynomial<T> {
    type Output = OperatorPolynomial<T>;
    fn add(self, rhs: Self) -> Self::Output {
        self.try_add(rhs).expect("incompatible operator polynomials")
    }
}

impl<T: Real> Sub for &OperatorPolynomial<T> {
    type Output = OperatorPolynomial<T>;
    fn sub(self, rhs: Self) -> Self::Output {
        self.try_sub(rhs).expect("incompatible operator polynomials")
    }
}

impl<T: Real> Mul for &OperatorPolynomial<T> {
    type Output = OperatorPolynomial<T>;
    fn mul(self, rhs: Self) -> Self::Output {
        self.multiply(rhs).expect("incompatible operator polynomials")
    }
}

impl<T: Real> Mul<Cplx<T>> for &OperatorPolynomial<T> {
    type Output = OperatorPolynomial<T>;
    fn mul(self, rhs: Cplx<T>) -> Self::Output {
        self.scale(rhs)
    }
}

impl<T: Real> Neg for &OperatorPolynomial<T> {
    type Output = OperatorPolynomial<T>;
    fn neg(self) -> Self::Output {
        self.scale(-Cplx::<T>::one())
    }
}

impl<T: Real> Add for OperatorPolynomial<T> {
    type Output = OperatorPolynomial<T>;
    fn add(self, rhs: Self) -> Self::Output {
        &self + &rhs
    }
}

impl<T: Real> Sub for OperatorPolynomial<T> {
    type Output = OperatorPolynomial<T>;
    fn sub(self, rhs: Self) -> Self::Output {
        &self - &rhs
    }
}

impl<T: Real> Mul for OperatorPolynomial<T> {
    type Output = OperatorPolynomial<T>;
    fn mul(self, rhs: Self) -> Self::Output {
        &self * &rhs
    }
}

impl<T: Real> fmt::Display for OperatorPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_polynomial(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = OperatorPolynomial<f64>;

    #[test]
    fn car_on_one_mode() {
        let a = P::annihilate(1, 1);
        let c = P::create(1, 1);
        let expected = &P::identity(Family::Fermionic, 1) - &P::number(1, 1);
        assert!(a.multiply(&c).unwrap().approx_eq(&expected, 1e-14));
    }

    #[test]
    fn pauli_xy_is_iz() {
        let x = P::pauli(1, 1, Axis::X);
        let y = P::pauli(1, 1, Axis::Y);
        let expected = P::pauli(1, 1, Axis::Z).scale(P::i());
        assert!(x.multiply(&y).unwrap().approx_eq(&expected, 1e-14));
    }

    #[test]
    fn number_product_canonical() {
        let prod = P::number(2, 2).multiply(&P::number(2, 1)).unwrap();
        assert_eq!(prod.len(), 1);
        let c = prod.coefficient_of(&[
            Factor::create(2),
            Factor::create(1),
            Factor::annihilate(2),
            Factor::annihilate(1),
        ]);
        assert!((c - Cplx::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn family_mismatch_is_an_error() {
        let a = P::annihilate(1, 1);
        let x = P::pauli(1, 1, Axis::X);
        assert!(matches!(a.multiply(&x), Err(Error::FamilyMismatch { .. })));
        assert!(matches!(a.commutator(&x), Err(Error::FamilyMismatch { .. })));
    }

    #[test]
    fn creation_annihilation_commutator() {
        let c = P::create(1, 1);
        let a = P::annihilate(1, 1);
        let expected = &P::number(1, 1).scale_real(2.0) - &P::identity(Family::Fermionic, 1);
        assert!(c.commutator(&a).unwrap().approx_eq(&expected, 1e-14));
    }

    #[test]
    fn excitation_commutator() {
        let lhs = P::excitation(2, 1, 2).commutator(&P::excitation(2, 2, 1)).unwrap();
        let expected = &P::number(2, 1) - &P::number(2, 2);
        assert!(lhs.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn majorana_commutators() {
        let g = |j| P::majorana(2, j);
        let g23 = g(2).multiply(&g(3)).unwrap();
        assert!(g(1).commutator(&g23).unwrap().is_zero());
        let g12 = g(1).multiply(&g(2)).unwrap();
        let expected = g(2).scale_real(2.0);
        assert!(g(1).commutator(&g12).unwrap().approx_eq(&expected, 1e-14));
    }

    #[test]
    fn adjoint_and_hermiticity() {
        let e21 = P::excitation(2, 2, 1);
        assert!(e21.adjoint().approx_eq(&P::excitation(2, 1, 2), 1e-14));
        assert!(P::number(1, 1).scale(P::i()).is_antihermitian());
        assert!(!P::number(1, 1).scale(P::i()).is_hermitian());
        assert!(P::number(2, 2).is_hermitian());
    }

    #[test]
    fn index_out_of_range() {
        let r = P::monomial(Family::Fermionic, 2, &[Factor::create(3)], Cplx::new(1.0, 0.0));
        assert!(matches!(r, Err(Error::IndexOutOfRange { .. })));
    }
}
