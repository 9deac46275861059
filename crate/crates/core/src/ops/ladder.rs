//! Ladder operators of a Lie algebra with respect to its Cartan subalgebra.

use nalgebra::DMatrix;

use super::algebra::AlgebraBasis;
use super::poly::OperatorPolynomial;
use crate::error::{Error, Result};
use crate::scalar::{abs, cabs, cre, lit, Cplx, Real};

/// Raising/lowering operators L_j^{+/-} with `[H_k, L_j^{+/-}] = +/- alpha_jk L_j^{+/-}`, where
/// `H_k = -i C_k` are the hermitian CSA operators.
#[derive(Clone, Debug)]
pub struct LadderSet<T: Real> {
    pub raising: Vec<OperatorPolynomial<T>>,
    pub lowering: Vec<OperatorPolynomial<T>>,
    /// `roots[j][k] = alpha_jk`.
    pub roots: Vec<Vec<T>>,
    pub csa: Vec<OperatorPolynomial<T>>,
}

impl<T: Real> LadderSet<T> {
    pub fn len(&self) -> usize {
        self.raising.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raising.is_empty()
    }

    pub fn root(&self, j: usize, k: usize) -> T {
        self.roots[j][k]
    }

    /// Largest coefficient of `[H_k, L^{+/-}_j] -/+ alpha_jk L^{+/-}_j` over all j, k.
    pub fn defect(&self) -> Result<T> {
        let mut worst = T::zero();
        for (j, alpha) in self.roots.iter().enumerate() {
            for (k, h) in self.csa.iter().enumerate() {
                let up = h.commutator(&self.raising[j])?;
                let down = h.commutator(&self.lowering[j])?;
                worst = worst.max(up.distance(&self.raising[j].scale_real(alpha[k])));
                worst = worst.max(down.distance(&self.lowering[j].scale_real(-alpha[k])));
            }
        }
        Ok(worst)
    }
}

/// Diagonalizes the adjoint action of the CSA over the complex extension.
///
/// In the Hilbert-Schmidt orthonormal frame each ad(-i C_k) is hermitian, so a generic real
/// combination of them has the root vectors as eigenvectors.
pub fn ladder_set<T: Real>(basis: &AlgebraBasis<T>) -> Result<LadderSet<T>> {
    let r = basis.csa_dim();
    if r == 0 {
        return Err(Error::CsaNotMaximal("basis has no designated CSA".into()));
    }
    let n = basis.dim();
    let chol = basis
        .hs_gram()
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Invalid("Hilbert-Schmidt metric is not positive".into()))?;
    let l = chol.l();
    let lt = l.transpose();
    let lt_inv = lt
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Invalid("singular metric".into()))?;
    let to_complex = |m: &DMatrix<T>| m.map(cre);
    let i_neg = Cplx::new(T::zero(), -T::one());
    let herm: Vec<DMatrix<Cplx<T>>> = (0..r)
        .map(|k| to_complex(&(&lt * basis.ad_matrix(k) * &lt_inv)) * i_neg)
        .collect();
    let mut generic = DMatrix::<Cplx<T>>::zeros(n, n);
    for (k, m) in herm.iter().enumerate() {
        generic += m * cre(lit::<T>(weight(k)));
    }
    // Symmetrize against rounding before the hermitian solver.
    let generic = (&generic + generic.adjoint()) * cre(lit::<T>(0.5));
    let eig = generic.symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(T::one(), |a, &b| a.max(abs(b)));
    let tol = scale * lit(1e-8);

    let mut zero_roots = 0;
    let mut raising = Vec::new();
    let mut roots = Vec::new();
    let lt_inv_c = to_complex(&lt_inv);
    for c in 0..n {
        let v = eig.eigenvectors.column(c).into_owned();
        let alpha: Vec<T> = herm
            .iter()
            .map(|m| (v.adjoint() * m * &v)[(0, 0)].re)
            .collect();
        if alpha.iter().all(|a| abs(*a) <= tol) {
            zero_roots += 1;
            continue;
        }
        let last = alpha
            .iter()
            .rev()
            .find(|a| abs(**a) > tol)
            .copied()
            .unwrap_or_else(T::zero);
        if last < T::zero() {
            continue;
        }
        let x = &lt_inv_c * &v;
        let op = normalize(basis.complex_element(&x));
        raising.push(op);
        roots.push(alpha);
    }
    if zero_roots > r {
        return Err(Error::CsaNotMaximal(format!(
            "{} elements commute with the CSA but it has only {r}",
            zero_roots
        )));
    }
    let lowering = raising.iter().map(OperatorPolynomial::adjoint).collect();
    Ok(LadderSet {
        raising,
        lowering,
        roots,
        csa: basis.csa_hermitian(),
    })
}

/// log of the k-th prime; these are rationally independent, so no two distinct integer
/// root vectors share an eigenvalue of the combination.
fn weight(k: usize) -> f64 {
    let mut primes = Vec::new();
    let mut c = 2u64;
    while primes.len() <= k {
        if primes.iter().all(|p| c % p != 0) {
            primes.push(c);
        }
        c += 1;
    }
    (primes[k] as f64).ln()
}

/// Scales so the largest coefficient (first in canonical order on ties) becomes 1.
fn normalize<T: Real>(p: OperatorPolynomial<T>) -> OperatorPolynomial<T> {
    let max = p.max_abs_coefficient();
    let pivot = p
        .terms()
        .find(|(_, c)| cabs(**c) >= max * lit(1.0 - 1e-9))
        .map(|(_, c)| *c);
    match pivot {
        Some(c) => p.scale(Cplx::new(T::one(), T::zero()) / c),
        None => p,
    }
}
