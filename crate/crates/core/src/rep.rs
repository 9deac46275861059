//! Dense matrices on the 2^N occupation / computational basis and the exact-diagonalization
//! oracle built on them.
//!
//! Basis index bit `p - 1` is the occupation of mode `p` (or the state of qubit `p`, with
//! bit 1 the z = -1 state). Fermionic operators carry the sign (-1)^(occupied modes below p).

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ops::{fermionic_from_majorana, AlgebraBasis, Axis, Factor, Family, OperatorPolynomial};
use crate::scalar::{abs, cabs, cre, lit, to_f64, Cplx, Real};

/// Largest mode/qubit count the dense oracle accepts (dimension 16384).
pub const ORACLE_CAP: usize = 14;

/// Relative eigenvalue tolerance used to group degenerate levels.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// MF-state tolerance on RDM idempotency / single-qubit purity.
pub const MF_STATE_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct MatrixRep<T: Real> {
    pub family: Family,
    pub modes: usize,
    pub matrix: DMatrix<Cplx<T>>,
}

impl<T: Real> MatrixRep<T> {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn hermiticity_defect(&self) -> T {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .fold(T::zero(), |a, z| a.max(cabs(*z)))
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol
    }
}

/// Dense matrix of `p` on `modes` modes (or qubits).
pub fn to_matrix<T: Real>(p: &OperatorPolynomial<T>, modes: usize) -> Result<MatrixRep<T>> {
    if modes > ORACLE_CAP {
        return Err(Error::OracleCap {
            modes,
            cap: ORACLE_CAP,
        });
    }
    let max = p.terms().map(|(s, _)| s.max_index()).max().unwrap_or(0);
    if max > p.family().max_index(modes) {
        return Err(Error::IndexOutOfRange {
            family: p.family(),
            index: max,
            modes,
        });
    }
    let converted;
    let q = if p.family() == Family::Majorana {
        converted = fermionic_from_majorana(p)?;
        &converted
    } else {
        p
    };
    let dim = 1usize << modes;
    let mut m = DMatrix::<Cplx<T>>::zeros(dim, dim);
    for (s, c) in q.terms() {
        for col in 0..dim {
            if let Some((row, phase)) = act(s.factors(), col) {
                m[(row, col)] += *c * phase.to_complex::<T>();
            }
        }
    }
    Ok(MatrixRep {
        family: p.family(),
        modes,
        matrix: m,
    })
}

/// Diagonal of a polynomial that is diagonal in the computational basis, without building
/// the dense matrix.
pub fn diagonal<T: Real>(p: &OperatorPolynomial<T>, modes: usize) -> Result<DVector<Cplx<T>>> {
    if modes > ORACLE_CAP {
        return Err(Error::OracleCap {
            modes,
            cap: ORACLE_CAP,
        });
    }
    let converted;
    let q = if p.family() == Family::Majorana {
        converted = fermionic_from_majorana(p)?;
        &converted
    } else {
        p
    };
    if let Some((s, _)) = q.terms().find(|(s, _)| !s.is_diagonal()) {
        return Err(Error::Invalid(format!("`{s}` is not diagonal")));
    }
    let dim = 1usize << modes;
    let mut d = DVector::<Cplx<T>>::zeros(dim);
    for (s, c) in q.terms() {
        for (j, slot) in d.iter_mut().enumerate() {
            if let Some((row, phase)) = act(s.factors(), j) {
                debug_assert_eq!(row, j);
                *slot += *c * phase.to_complex::<T>();
            }
        }
    }
    Ok(d)
}

#[derive(Clone, Copy)]
struct Quarter(u8);

impl Quarter {
    fn to_complex<T: Real>(self) -> Cplx<T> {
        match self.0 % 4 {
            0 => Cplx::new(T::one(), T::zero()),
            1 => Cplx::new(T::zero(), T::one()),
            2 => Cplx::new(-T::one(), T::zero()),
            _ => Cplx::new(T::zero(), -T::one()),
        }
    }
}

/// Applies a string (rightmost factor first) to a basis state.
fn act(factors: &[Factor], state: usize) -> Option<(usize, Quarter)> {
    let mut idx = state;
    let mut q = 0u8;
    for f in factors.iter().rev() {
        match *f {
            Factor::Fermion { mode, dagger } => {
                let bit = 1usize << (mode - 1);
                let occupied = idx & bit != 0;
                if occupied == dagger {
                    return None;
                }
                if (idx & (bit - 1)).count_ones() % 2 == 1 {
                    q += 2;
                }
                idx ^= bit;
            }
            Factor::Pauli { qubit, axis } => {
                let bit = 1usize << (qubit - 1);
                let set = idx & bit != 0;
                match axis {
                    Axis::X => idx ^= bit,
                    Axis::Y => {
                        // y|0> = i|1>, y|1> = -i|0>
                        q += if set { 3 } else { 1 };
                        idx ^= bit;
                    }
                    Axis::Z => {
                        if set {
                            q += 2;
                        }
                    }
                }
            }
            Factor::Majorana(_) => unreachable!("Majorana strings are converted first"),
        }
    }
    Some((idx, Quarter(q % 4)))
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenSystem<T: Real> {
    pub values: Vec<T>,
    pub vectors: DMatrix<Cplx<T>>,
}

impl<T: Real> EigenSystem<T> {
    /// Largest absolute eigenvalue.
    pub fn norm(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &b| a.max(abs(b)))
    }

    pub fn vector(&self, k: usize) -> DVector<Cplx<T>> {
        self.vectors.column(k).into_owned()
    }

    /// Ranges of (numerically) degenerate eigenvalues, grouped at `1e-8 * norm`.
    pub fn degeneracy_groups(&self) -> Vec<Range<usize>> {
        let tol = self.norm().max(T::one()) * lit(DEGENERACY_TOL);
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=self.values.len() {
            if k == self.values.len() || self.values[k] - self.values[k - 1] > tol {
                out.push(start..k);
                start = k;
            }
        }
        out
    }

    /// Max over pairs of ||H v - E v||.
    pub fn max_residual(&self, h: &DMatrix<Cplx<T>>) -> T {
        let mut worst = T::zero();
        for (k, &e) in self.values.iter().enumerate() {
            let v = self.vectors.column(k);
            let r = h * v - v * cre(e);
            worst = worst.max(r.norm());
        }
        worst
    }
}

/// Full spectrum of a hermitian matrix.
pub fn exact_eigensystem<T: Real>(h: &MatrixRep<T>) -> Result<EigenSystem<T>> {
    let scale = h.matrix.iter().fold(T::one(), |a, z| a.max(cabs(*z)));
    let defect = h.hermiticity_defect();
    if defect > scale * lit(1e-10) {
        return Err(Error::NotHermitian(to_f64(defect)));
    }
    Ok(hermitian_eigen(&h.matrix))
}

/// Sorted eigen-decomposition of a hermitian matrix (no checks).
pub fn hermitian_eigen<T: Real>(m: &DMatrix<Cplx<T>>) -> EigenSystem<T> {
    let sym = (m + m.adjoint()) * cre(lit::<T>(0.5));
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = m.nrows();
    let vectors = DMatrix::from_fn(n, order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    EigenSystem { values, vectors }
}

fn check_norm<T: Real>(state: &DVector<Cplx<T>>) -> Result<()> {
    let n = state.norm();
    if abs(n - T::one()) > lit(1e-8) {
        return Err(Error::Unnormalized(to_f64(n)));
    }
    Ok(())
}

/// `<psi|H|psi>` for a normalized state.
pub fn expectation<T: Real>(h: &DMatrix<Cplx<T>>, state: &DVector<Cplx<T>>) -> Result<T> {
    check_norm(state)?;
    Ok(state.dotc(&(h * state)).re)
}

/// `<psi|H^2|psi> - <psi|H|psi>^2 = ||(H - <H>) psi||^2` for a normalized state.
pub fn variance<T: Real>(h: &DMatrix<Cplx<T>>, state: &DVector<Cplx<T>>) -> Result<T> {
    check_norm(state)?;
    let hv = h * state;
    let e = state.dotc(&hv).re;
    let r = hv - state * cre(e);
    Ok(r.norm_squared())
}

/// Unit vector along `state`; errors on the zero vector.
pub fn normalized<T: Real>(state: &DVector<Cplx<T>>) -> Result<DVector<Cplx<T>>> {
    let n = state.norm();
    if n == T::zero() {
        return Err(Error::Unnormalized(0.0));
    }
    Ok(state.unscale(n))
}

/// Which MF criterion was applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MfCriterion {
    /// Every single-qubit reduced density matrix is pure.
    QubitPurity,
    /// The 1-RDM of a fixed-particle-number state is idempotent.
    SlaterIdempotency,
    /// The generalized (a, a^dag) 1-RDM is idempotent.
    GeneralizedIdempotency,
}

#[derive(Clone, Debug)]
pub struct MfCheck<T: Real> {
    pub is_mf: bool,
    /// ||D^2 - D|| (Frobenius) or the largest single-qubit impurity 1 - Tr rho^2.
    pub defect: T,
    pub criterion: MfCriterion,
}

/// Decides whether a state is a mean-field state (product state / Slater determinant /
/// quasi-particle vacuum). The state is normalized first.
pub fn mf_state_check<T: Real>(
    state: &DVector<Cplx<T>>,
    family: Family,
    modes: usize,
) -> Result<MfCheck<T>> {
    let dim = 1usize << modes;
    if state.len() != dim {
        return Err(Error::Invalid(format!(
            "state has length {} but {modes} modes need {dim}",
            state.len()
        )));
    }
    let psi = normalized(state)?;
    let tol: T = lit(MF_STATE_TOL);
    match family {
        Family::Pauli => {
            let defect = (1..=modes)
                .map(|k| T::one() - qubit_purity(&psi, k))
                .fold(T::zero(), |a, b| a.max(b));
            Ok(MfCheck {
                is_mf: defect <= tol,
                defect,
                criterion: MfCriterion::QubitPurity,
            })
        }
        Family::Fermionic | Family::Majorana => {
            if definite_particle_number(&psi) {
                let d = one_rdm(&psi, modes);
                let defect = (&d * &d - &d).norm();
                Ok(MfCheck {
                    is_mf: defect <= tol,
                    defect,
                    criterion: MfCriterion::SlaterIdempotency,
                })
            } else {
                let r = generalized_rdm(&psi, modes);
                let defect = (&r * &r - &r).norm();
                Ok(MfCheck {
                    is_mf: defect <= tol,
                    defect,
                    criterion: MfCriterion::GeneralizedIdempotency,
                })
            }
        }
    }
}

fn definite_particle_number<T: Real>(psi: &DVector<Cplx<T>>) -> bool {
    let mut weights = [T::zero(); 65];
    for (i, a) in psi.iter().enumerate() {
        weights[i.count_ones() as usize] += a.norm_sqr();
    }
    weights.iter().any(|&w| w >= T::one() - lit(1e-10))
}

/// a_p |psi> (p 1-based) as a dense vector.
fn apply_factor<T: Real>(psi: &DVector<Cplx<T>>, f: Factor) -> DVector<Cplx<T>> {
    let mut out = DVector::<Cplx<T>>::zeros(psi.len());
    for (i, a) in psi.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        if let Some((j, q)) = act(&[f], i) {
            out[j] += *a * q.to_complex::<T>();
        }
    }
    out
}

/// D_pq = <a_p^dag a_q>.
pub fn one_rdm<T: Real>(psi: &DVector<Cplx<T>>, modes: usize) -> DMatrix<Cplx<T>> {
    let lowered: Vec<_> = (1..=modes)
        .map(|p| apply_factor(psi, Factor::annihilate(p)))
        .collect();
    DMatrix::from_fn(modes, modes, |p, q| lowered[p].dotc(&lowered[q]))
}

/// R_ij = <c_i^dag c_j> with c = (a_1..a_N, a_1^dag..a_N^dag).
pub fn generalized_rdm<T: Real>(psi: &DVector<Cplx<T>>, modes: usize) -> DMatrix<Cplx<T>> {
    let applied: Vec<_> = (1..=modes)
        .map(|p| apply_factor(psi, Factor::annihilate(p)))
        .chain((1..=modes).map(|p| apply_factor(psi, Factor::create(p))))
        .collect();
    let n = 2 * modes;
    DMatrix::from_fn(n, n, |i, j| applied[i].dotc(&applied[j]))
}

/// Tr rho_k^2 of the reduced state of qubit `k`.
pub fn qubit_purity<T: Real>(psi: &DVector<Cplx<T>>, k: usize) -> T {
    let bit = 1usize << (k - 1);
    let mut rho = [[Cplx::<T>::zero(); 2]; 2];
    for i in 0..psi.len() {
        if i & bit != 0 {
            continue;
        }
        let a0 = psi[i];
        let a1 = psi[i | bit];
        rho[0][0] += a0 * a0.conj();
        rho[0][1] += a0 * a1.conj();
        rho[1][0] += a1 * a0.conj();
        rho[1][1] += a1 * a1.conj();
    }
    let mut tr = T::zero();
    for r in &rho {
        for z in r {
            tr += z.norm_sqr();
        }
    }
    tr
}

/// A computational basis state labelled by the eigenvalues of the hermitian CSA operators.
#[derive(Clone, Debug, PartialEq)]
pub struct CsaEigenstate<T: Real> {
    pub label: Vec<T>,
    pub index: usize,
}

impl<T: Real> CsaEigenstate<T> {
    pub fn vector(&self, dim: usize) -> DVector<Cplx<T>> {
        let mut v = DVector::zeros(dim);
        v[self.index] = Cplx::one();
        v
    }
}

/// Labels of every basis state under `-i C_k`. Errors if a CSA element is not diagonal in
/// the computational basis.
pub fn csa_eigenstates<T: Real>(basis: &AlgebraBasis<T>) -> Result<Vec<CsaEigenstate<T>>> {
    let mats = csa_matrices(basis)?;
    let dim = 1usize << basis.modes();
    Ok((0..dim)
        .map(|j| CsaEigenstate {
            label: mats.iter().map(|m| m[(j, j)].re).collect(),
            index: j,
        })
        .collect())
}

/// Matrices of the hermitian CSA operators, checked to be diagonal.
pub fn csa_matrices<T: Real>(basis: &AlgebraBasis<T>) -> Result<Vec<DMatrix<Cplx<T>>>> {
    let mut out = Vec::new();
    for (k, h) in basis.csa_hermitian().iter().enumerate() {
        let m = to_matrix(h, basis.modes())?.matrix;
        let off = off_diagonal_max(&m);
        if off > lit(1e-10) {
            return Err(Error::Invalid(format!(
                "CSA element {} is not diagonal in the computational basis",
                basis.label(k)
            )));
        }
        out.push(m);
    }
    Ok(out)
}

pub(crate) fn off_diagonal_max<T: Real>(m: &DMatrix<Cplx<T>>) -> T {
    let mut worst = T::zero();
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            if r != c {
                worst = worst.max(cabs(m[(r, c)]));
            }
        }
    }
    worst
}

/// Frobenius norm of `[a, b]`.
pub fn commutator_norm<T: Real>(a: &DMatrix<Cplx<T>>, b: &DMatrix<Cplx<T>>) -> T {
    (a * b - b * a).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = OperatorPolynomial<f64>;

    #[test]
    fn number_operator_matrix() {
        let m = to_matrix(&P::number(1, 1), 1).unwrap().matrix;
        assert_eq!(m[(0, 0)], Cplx::new(0.0, 0.0));
        assert_eq!(m[(1, 1)], Cplx::new(1.0, 0.0));
    }

    #[test]
    fn pauli_z_matrix() {
        let m = to_matrix(&P::pauli(1, 1, Axis::Z), 1).unwrap().matrix;
        assert_eq!(m[(0, 0)], Cplx::new(1.0, 0.0));
        assert_eq!(m[(1, 1)], Cplx::new(-1.0, 0.0));
    }

    #[test]
    fn oracle_cap() {
        let r = to_matrix(&P::number(15, 1), 15);
        assert!(matches!(r, Err(Error::OracleCap { .. })));
    }

    #[test]
    fn identity_spectrum() {
        let m = to_matrix(&P::identity(Family::Pauli, 2), 2).unwrap();
        let e = exact_eigensystem(&m).unwrap();
        assert!(e.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn x_on_up_state() {
        let x = to_matrix(&P::pauli(1, 1, Axis::X), 1).unwrap().matrix;
        let up = DVector::from_vec(vec![Cplx::new(1.0, 0.0), Cplx::new(0.0, 0.0)]);
        assert!(expectation(&x, &up).unwrap().abs() < 1e-15);
        assert!((variance(&x, &up).unwrap() - 1.0).abs() < 1e-15);
        let unnormalized = up.scale(2.0);
        assert!(matches!(variance(&x, &unnormalized), Err(Error::Unnormalized(_))));
    }

    #[test]
    fn product_and_bell_states() {
        let up_up = DVector::from_vec(vec![
            Cplx::new(1.0, 0.0),
            Cplx::new(0.0, 0.0),
            Cplx::new(0.0, 0.0),
            Cplx::new(0.0, 0.0),
        ]);
        assert!(mf_state_check(&up_up, Family::Pauli, 2).unwrap().is_mf);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DVector::from_vec(vec![
            Cplx::new(0.0, 0.0),
            Cplx::new(s, 0.0),
            Cplx::new(s, 0.0),
            Cplx::new(0.0, 0.0),
        ]);
        let check = mf_state_check(&bell, Family::Pauli, 2).unwrap();
        assert!(!check.is_mf);
        assert!((check.defect - 0.5).abs() < 1e-12);
    }
}
