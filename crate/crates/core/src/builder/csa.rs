//! Functions of the Cartan subalgebra: F(C_k) and Löwdin projectors.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::ops::{majorana_from_fermionic, AlgebraBasis, Axis, Family, OperatorPolynomial};
use crate::rep::diagonal;
use crate::scalar::{abs, cre, lit, to_f64, Cplx, Real, COEFF_TOL};

/// Hermitian CSA operators C_k together with their spectra.
#[derive(Clone, Debug)]
pub struct CsaOperators<T: Real> {
    family: Family,
    modes: usize,
    ops: Vec<OperatorPolynomial<T>>,
    labels: Vec<String>,
    spectra: Vec<Vec<T>>,
    /// C_k is n_k (or z_k) for every k, so tuples follow from the bits.
    standard: bool,
}

const SPECTRUM_TOL: f64 = 1e-9;

impl<T: Real> CsaOperators<T> {
    /// n_p = a_p^dag a_p with spectrum {0, 1}. For the Majorana family the same operators are
    /// written in Majorana form.
    pub fn occupations(family: Family, modes: usize) -> Result<Self> {
        let mut ops = Vec::with_capacity(modes);
        for p in 1..=modes {
            let n = OperatorPolynomial::number(modes, p);
            ops.push(match family {
                Family::Fermionic => n,
                Family::Majorana => majorana_from_fermionic(&n)?,
                Family::Pauli => {
                    return Err(Error::Invalid("occupations are not defined for qubits".into()))
                }
            });
        }
        Ok(CsaOperators {
            family,
            modes,
            ops,
            labels: (1..=modes).map(|p| format!("n{p}")).collect(),
            spectra: vec![vec![T::zero(), T::one()]; modes],
            standard: true,
        })
    }

    /// z_k with spectrum {1, -1}.
    pub fn pauli_z(qubits: usize) -> Self {
        CsaOperators {
            family: Family::Pauli,
            modes: qubits,
            ops: (1..=qubits)
                .map(|k| OperatorPolynomial::pauli(qubits, k, Axis::Z))
                .collect(),
            labels: (1..=qubits).map(|k| format!("z{k}")).collect(),
            spectra: vec![vec![T::one(), -T::one()]; qubits],
            standard: true,
        }
    }

    /// Occupations for fermions and Majoranas, z for qubits.
    pub fn standard(family: Family, modes: usize) -> Self {
        match family {
            Family::Pauli => Self::pauli_z(modes),
            _ => Self::occupations(family, modes).expect("fermionic family"),
        }
    }

    /// The hermitian CSA of a basis, -i C_k. Each must be diagonal in the computational basis.
    pub fn from_basis(basis: &AlgebraBasis<T>) -> Result<Self> {
        let modes = basis.modes();
        let mut ops = Vec::new();
        let mut spectra = Vec::new();
        for h in basis.csa_hermitian() {
            let d = diagonal(&h, modes)?;
            let mut values: Vec<T> = Vec::new();
            for z in d.iter() {
                if !values.iter().any(|v| abs(*v - z.re) <= lit(SPECTRUM_TOL)) {
                    values.push(z.re);
                }
            }
            values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            ops.push(h);
            spectra.push(values);
        }
        let mut out = CsaOperators {
            family: basis.family(),
            modes,
            ops,
            labels: basis.csa_indices().map(|k| basis.label(k).to_string()).collect(),
            spectra,
            standard: false,
        };
        out.standard = out.detect_standard();
        Ok(out)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn operator(&self, k: usize) -> &OperatorPolynomial<T> {
        &self.ops[k]
    }

    pub fn operators(&self) -> &[OperatorPolynomial<T>] {
        &self.ops
    }

    pub fn label(&self, k: usize) -> &str {
        &self.labels[k]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn spectrum(&self, k: usize) -> &[T] {
        &self.spectra[k]
    }

    /// Eigenvalue tuple of computational basis state `j`.
    pub fn tuple(&self, j: usize) -> Vec<T> {
        if self.standard {
            return (0..self.len())
                .map(|k| {
                    let set = j >> k & 1 == 1;
                    match (self.family, set) {
                        (Family::Pauli, false) => T::one(),
                        (Family::Pauli, true) => -T::one(),
                        (_, false) => T::zero(),
                        (_, true) => T::one(),
                    }
                })
                .collect();
        }
        self.ops
            .iter()
            .map(|h| diagonal(h, self.modes).map(|d| d[j].re).unwrap_or_else(|_| T::zero()))
            .collect()
    }

    /// Eigenvalue tuples of all 2^N basis states.
    pub fn tuples(&self) -> Result<Vec<Vec<T>>> {
        let dim = 1usize << self.modes;
        if self.standard {
            return Ok((0..dim).map(|j| self.tuple(j)).collect());
        }
        let diags = self
            .ops
            .iter()
            .map(|h| diagonal(h, self.modes))
            .collect::<Result<Vec<DVector<Cplx<T>>>>>()?;
        Ok((0..dim)
            .map(|j| diags.iter().map(|d| d[j].re).collect())
            .collect())
    }

    /// Basis state with the given tuple, if any.
    pub fn state_of(&self, tuple: &[T]) -> Result<Option<usize>> {
        Ok(self
            .tuples()?
            .iter()
            .position(|t| same_tuple(t, tuple)))
    }

    fn detect_standard(&self) -> bool {
        self.len() == self.modes
            && self.ops.iter().enumerate().all(|(k, op)| {
                let expected = match self.family {
                    Family::Pauli => OperatorPolynomial::pauli(self.modes, k + 1, Axis::Z),
                    Family::Fermionic => OperatorPolynomial::number(self.modes, k + 1),
                    Family::Majorana => match majorana_from_fermionic(&OperatorPolynomial::number(self.modes, k + 1)) {
                        Ok(m) => m,
                        Err(_) => return false,
                    },
                };
                op.approx_eq(&expected, lit(1e-12))
            })
    }

    /// Index of the spectrum value of C_k closest to `value`, if within tolerance.
    fn spectrum_index(&self, k: usize, value: T) -> Option<usize> {
        self.spectra[k]
            .iter()
            .position(|s| abs(*s - value) <= lit(SPECTRUM_TOL))
    }

    pub(crate) fn check_tuple(&self, tuple: &[T]) -> Result<()> {
        if tuple.len() != self.len() {
            return Err(Error::Invalid(format!(
                "tuple has {} entries but the CSA has {}",
                tuple.len(),
                self.len()
            )));
        }
        for (k, v) in tuple.iter().enumerate() {
            if self.spectrum_index(k, *v).is_none() {
                return Err(Error::Invalid(format!(
                    "{} is not an eigenvalue of {}",
                    to_f64(*v),
                    self.labels[k]
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn same_tuple<T: Real>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| abs(*x - *y) <= lit(SPECTRUM_TOL))
}

/// A real polynomial in the CSA operators. Monomials are sorted multisets of CSA indices;
/// the empty monomial is the constant.
#[derive(Clone, Debug, PartialEq)]
pub struct CsaPolynomial<T: Real> {
    terms: BTreeMap<Vec<usize>, T>,
}

impl<T: Real> Default for CsaPolynomial<T> {
    fn default() -> Self {
        CsaPolynomial {
            terms: BTreeMap::new(),
        }
    }
}

impl<T: Real> CsaPolynomial<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(&[], c);
        p
    }

    /// sum_k c_k C_k.
    pub fn linear(c: &[T]) -> Self {
        let mut p = Self::zero();
        for (k, v) in c.iter().enumerate() {
            p.add_term(&[k], *v);
        }
        p
    }

    /// sum d_kl C_k C_l over the given `(k, l, d_kl)` entries.
    pub fn quadratic(d: &[(usize, usize, T)]) -> Self {
        let mut p = Self::zero();
        for &(k, l, v) in d {
            p.add_term(&[k, l], v);
        }
        p
    }

    pub fn add_term(&mut self, monomial: &[usize], c: T) {
        let mut key = monomial.to_vec();
        key.sort_unstable();
        let slot = self.terms.entry(key.clone()).or_insert_with(T::zero);
        *slot += c;
        if abs(*slot) < lit(COEFF_TOL) {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &T)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, monomial: &[usize]) -> T {
        let mut key = monomial.to_vec();
        key.sort_unstable();
        self.terms.get(&key).copied().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn try_add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, *c);
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m, *c * s);
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut m = a.clone();
                m.extend_from_slice(b);
                out.add_term(&m, *ca * *cb);
            }
        }
        out
    }

    /// F(C) at an eigenvalue tuple.
    pub fn evaluate(&self, tuple: &[T]) -> T {
        self.terms
            .iter()
            .map(|(m, c)| m.iter().fold(*c, |acc, &k| acc * tuple[k]))
            .fold(T::zero(), |a, b| a + b)
    }

    /// Rewrites powers C_k^m with m at least the number of distinct eigenvalues of C_k using
    /// the minimal polynomial prod_s (C_k - s) = 0. The operator is unchanged.
    pub fn reduced(&self, csa: &CsaOperators<T>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            // Expand each power into its remainder modulo the minimal polynomial.
            let mut partial: Vec<(Vec<usize>, T)> = vec![(Vec::new(), *c)];
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for &k in m {
                *counts.entry(k).or_default() += 1;
            }
            for (k, power) in counts {
                let rem = power_remainder(csa.spectrum(k), power);
                let mut next = Vec::new();
                for (mono, coeff) in &partial {
                    for (deg, r) in rem.iter().enumerate() {
                        if abs(*r) < lit(COEFF_TOL) {
                            continue;
                        }
                        let mut mm = mono.clone();
                        mm.extend(std::iter::repeat_n(k, deg));
                        next.push((mm, *coeff * *r));
                    }
                }
                partial = next;
            }
            for (mono, coeff) in partial {
                out.add_term(&mono, coeff);
            }
        }
        out
    }

    /// Operator form over the given CSA.
    pub fn to_operator(&self, csa: &CsaOperators<T>) -> Result<OperatorPolynomial<T>> {
        let mut out = OperatorPolynomial::zero(csa.family(), csa.modes());
        for (m, c) in &self.terms {
            let mut term = OperatorPolynomial::constant(csa.family(), csa.modes(), cre(*c));
            for &k in m {
                if k >= csa.len() {
                    return Err(Error::Invalid(format!(
                        "monomial uses CSA element {k} but only {} exist",
                        csa.len()
                    )));
                }
                term = term.multiply(csa.operator(k))?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// The unique reduced polynomial with F(C_J) = v_J on every listed tuple and zero on all
    /// other tuples: sum_J v_J P_J with P_J the Löwdin projectors.
    pub fn interpolate(csa: &CsaOperators<T>, values: &[(Vec<T>, T)]) -> Result<Self> {
        let mut out = Self::zero();
        for (tuple, v) in values {
            if abs(*v) < lit(COEFF_TOL) {
                continue;
            }
            out = out.try_add(&lowdin_polynomial(csa, tuple)?.scale(*v));
        }
        Ok(out.reduced(csa))
    }

    /// Recognizes an operator that is a function of the CSA (diagonal in the computational
    /// basis) and returns it as a reduced polynomial.
    pub fn from_operator(p: &OperatorPolynomial<T>, csa: &CsaOperators<T>) -> Result<Self> {
        let d = diagonal(p, csa.modes())?;
        let tuples = csa.tuples()?;
        let values: Vec<(Vec<T>, T)> = tuples.into_iter().zip(d.iter().map(|z| z.re)).collect();
        Self::interpolate(csa, &values)
    }

    pub fn display<'a>(&'a self, csa: &'a CsaOperators<T>) -> CsaDisplay<'a, T> {
        CsaDisplay { poly: self, csa }
    }
}

/// Coefficients r_0..r_{d-1} with x^power = sum r_j x^j modulo prod_s (x - s).
fn power_remainder<T: Real>(spectrum: &[T], power: usize) -> Vec<T> {
    let d = spectrum.len().max(1);
    // minimal polynomial coefficients m_0..m_d (monic)
    let mut minpoly = vec![T::one()];
    for &s in spectrum {
        let mut next = vec![T::zero(); minpoly.len() + 1];
        for (j, c) in minpoly.iter().enumerate() {
            next[j + 1] += *c;
            next[j] -= *c * s;
        }
        minpoly = next;
    }
    let mut rem = vec![T::zero(); d];
    if power < d {
        rem[power] = T::one();
        return rem;
    }
    rem[0] = T::one();
    // multiply by x repeatedly, reducing x^d = -sum_{j<d} m_j x^j
    let mut cur = rem;
    for _ in 0..power {
        let top = cur[d - 1];
        let mut next = vec![T::zero(); d];
        for j in (1..d).rev() {
            next[j] = cur[j - 1];
        }
        for (j, slot) in next.iter_mut().enumerate() {
            *slot -= top * minpoly[j];
        }
        cur = next;
    }
    cur
}

/// Löwdin projector onto the CSA eigenspace with the given tuple, as a CSA polynomial:
/// prod_k prod_{s != t_k} (C_k - s) / (t_k - s).
pub fn lowdin_polynomial<T: Real>(csa: &CsaOperators<T>, target: &[T]) -> Result<CsaPolynomial<T>> {
    csa.check_tuple(target)?;
    let mut out = CsaPolynomial::constant(T::one());
    for (k, &t) in target.iter().enumerate() {
        out = out.multiply(&lowdin_factor(csa, k, t)?);
    }
    Ok(out)
}

/// prod_{s != t} (C_k - s) / (t - s).
pub(crate) fn lowdin_factor<T: Real>(csa: &CsaOperators<T>, k: usize, t: T) -> Result<CsaPolynomial<T>> {
    let mut out = CsaPolynomial::constant(T::one());
    let mut hit = false;
    for &s in csa.spectrum(k) {
        if abs(s - t) <= lit(SPECTRUM_TOL) {
            if hit {
                return Err(Error::DegenerateSpectrum(format!(
                    "{} is repeated in the spectrum of {}",
                    to_f64(t),
                    csa.label(k)
                )));
            }
            hit = true;
            continue;
        }
        let denom = t - s;
        let mut factor = CsaPolynomial::zero();
        factor.add_term(&[k], T::one() / denom);
        factor.add_term(&[], -s / denom);
        out = out.multiply(&factor);
    }
    if !hit {
        return Err(Error::Invalid(format!(
            "{} is not an eigenvalue of {}",
            to_f64(t),
            csa.label(k)
        )));
    }
    Ok(out)
}

/// Rank-one projector onto |C_J> as an operator polynomial.
pub fn lowdin_projector<T: Real>(csa: &CsaOperators<T>, target: &[T]) -> Result<OperatorPolynomial<T>> {
    lowdin_polynomial(csa, target)?.to_operator(csa)
}

pub struct CsaDisplay<'a, T: Real> {
    poly: &'a CsaPolynomial<T>,
    csa: &'a CsaOperators<T>,
}

impl<T: Real> fmt::Display for CsaDisplay<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.poly.terms().enumerate() {
            let c = to_f64(*c);
            if i > 0 {
                f.write_str(if c < 0.0 { " - " } else { " + " })?;
            } else if c < 0.0 {
                f.write_str("-")?;
            }
            write!(f, "{}", c.abs())?;
            for &k in m {
                write!(f, " {}", self.csa.label(k))?;
            }
        }
        Ok(())
    }
}
