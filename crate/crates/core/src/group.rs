//! Mean-field unitaries U = prod_k exp(theta_k A_k) and their action on operators.

use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::ops::{AlgebraBasis, Family, OperatorPolynomial};
use crate::optim::{levenberg_marquardt, random_angles, rng, LeastSquares, LmOptions};
use crate::rep::{hermitian_eigen, to_matrix, EigenSystem};
use crate::scalar::{cabs, cim, cre, lit, to_f64, Cplx, Real};

/// Ordered product `exp(theta_1 A_1) exp(theta_2 A_2) ...` over generators of a basis.
#[derive(Clone, Debug)]
pub struct MfRotation<T: Real> {
    basis: Arc<AlgebraBasis<T>>,
    factors: Vec<(usize, T)>,
}

impl<T: Real> MfRotation<T> {
    pub fn identity(basis: Arc<AlgebraBasis<T>>) -> Self {
        MfRotation {
            basis,
            factors: Vec::new(),
        }
    }

    pub fn new(basis: Arc<AlgebraBasis<T>>, factors: Vec<(usize, T)>) -> Result<Self> {
        if let Some(&(k, _)) = factors.iter().find(|(k, _)| *k >= basis.dim()) {
            return Err(Error::Invalid(format!(
                "generator index {k} out of range for a basis of dimension {}",
                basis.dim()
            )));
        }
        Ok(MfRotation { basis, factors })
    }

    /// Builds a rotation from `(label, angle)` pairs.
    pub fn from_labels(basis: Arc<AlgebraBasis<T>>, factors: &[(&str, T)]) -> Result<Self> {
        let resolved = factors
            .iter()
            .map(|&(label, angle)| {
                basis
                    .index_of(label)
                    .map(|k| (k, angle))
                    .ok_or_else(|| Error::Invalid(format!("unknown generator `{label}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MfRotation {
            basis,
            factors: resolved,
        })
    }

    pub fn basis(&self) -> &Arc<AlgebraBasis<T>> {
        &self.basis
    }

    pub fn factors(&self) -> &[(usize, T)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn angles(&self) -> Vec<T> {
        self.factors.iter().map(|f| f.1).collect()
    }

    /// Indices of generators carrying a nonzero angle.
    pub fn active_generators(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .factors
            .iter()
            .filter(|f| f.1 != T::zero())
            .map(|f| f.0)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn push(&mut self, generator: usize, angle: T) {
        self.factors.push((generator, angle));
    }

    /// U^dag: factors reversed with negated angles.
    pub fn inverse(&self) -> Self {
        MfRotation {
            basis: self.basis.clone(),
            factors: self.factors.iter().rev().map(|&(k, t)| (k, -t)).collect(),
        }
    }

    /// The product `self * other`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.basis, &other.basis) && self.basis.labels() != other.basis.labels() {
            return Err(Error::Invalid("rotations over different bases".into()));
        }
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Ok(MfRotation {
            basis: self.basis.clone(),
            factors,
        })
    }

    /// Matrix M with coords(U^dag X U) = M coords(X) for X in the algebra.
    pub fn adjoint_matrix(&self) -> DMatrix<T> {
        let n = self.basis.dim();
        let mut m = DMatrix::<T>::identity(n, n);
        for &(k, theta) in &self.factors {
            let e = (self.basis.ad_matrix(k) * (-theta)).exp();
            m = e * m;
        }
        m
    }

    /// Dense unitary on the 2^N space.
    pub fn matrix(&self) -> Result<DMatrix<Cplx<T>>> {
        rotation_matrix(self, self.basis.modes())
    }

    /// U^dag p U.
    pub fn apply(&self, p: &OperatorPolynomial<T>) -> Result<OperatorPolynomial<T>> {
        apply_rotation(self, p)
    }

    /// One `label angle` pair per line.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        for &(k, t) in &self.factors {
            let _ = writeln!(out, "{} {}", self.basis.label(k), to_f64(t));
        }
        out
    }

    pub fn from_record(basis: Arc<AlgebraBasis<T>>, record: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for (n, line) in record.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(label), Some(angle), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    line: n + 1,
                    message: "expected `<generator> <angle>`".into(),
                });
            };
            let k = basis.index_of(label).ok_or_else(|| Error::Parse {
                line: n + 1,
                message: format!("unknown generator `{label}`"),
            })?;
            let t: f64 = angle.parse().map_err(|_| Error::Parse {
                line: n + 1,
                message: format!("bad angle `{angle}`"),
            })?;
            factors.push((k, lit(t)));
        }
        Ok(MfRotation { basis, factors })
    }
}

/// U^dag p U, computed by conjugating every elementary symbol inside the module the basis
/// generates from them and multiplying the images back together. Degree in the symbols is
/// preserved.
pub fn apply_rotation<T: Real>(
    r: &MfRotation<T>,
    p: &OperatorPolynomial<T>,
) -> Result<OperatorPolynomial<T>> {
    let basis = r.basis();
    if p.family() != basis.family() {
        return Err(Error::FamilyMismatch {
            left: basis.family(),
            right: p.family(),
        });
    }
    if r.is_empty() {
        return p.with_modes(basis.modes().max(p.modes()));
    }
    let p = p.with_modes(basis.modes())?;
    let module = basis.symbol_module()?;
    let d = module.elements.len();
    let mut m = DMatrix::<Cplx<T>>::identity(d, d);
    for &(k, theta) in r.factors() {
        let e = (&module.ad[k] * cre(-theta)).exp();
        m = e * m;
    }
    let family = basis.family();
    let modes = basis.modes();
    p.substitute(family, modes, |f| {
        let coords = &m * module.coordinates_of(f);
        let mut out = OperatorPolynomial::zero(family, modes);
        for (i, c) in coords.iter().enumerate() {
            out.axpy(*c, &module.elements[i]);
        }
        Ok(out)
    })
}

/// Dense matrices of the generators with cached spectral data for fast exponentials.
#[derive(Clone, Debug)]
pub struct GeneratorMatrices<T: Real> {
    pub matrices: Vec<DMatrix<Cplx<T>>>,
    spectra: Vec<EigenSystem<T>>,
}

impl<T: Real> GeneratorMatrices<T> {
    pub fn new(basis: &AlgebraBasis<T>, modes: usize) -> Result<Self> {
        let mut matrices = Vec::with_capacity(basis.dim());
        let mut spectra = Vec::with_capacity(basis.dim());
        for g in basis.generators() {
            let m = to_matrix(g, modes)?.matrix;
            // i A is hermitian.
            spectra.push(hermitian_eigen(&(&m * cim(T::one()))));
            matrices.push(m);
        }
        Ok(GeneratorMatrices { matrices, spectra })
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, |m| m.nrows())
    }

    /// exp(theta A_k) = W diag(exp(-i theta lambda)) W^dag with i A_k = W diag(lambda) W^dag.
    pub fn exp(&self, k: usize, theta: T) -> DMatrix<Cplx<T>> {
        let e = &self.spectra[k];
        let phases = DVector::from_iterator(
            e.values.len(),
            e.values.iter().map(|&l| {
                let a = -theta * l;
                Cplx::new(a.cos(), a.sin())
            }),
        );
        let mut left = e.vectors.clone();
        for (c, ph) in phases.iter().enumerate() {
            let mut col = left.column_mut(c);
            col *= *ph;
        }
        left * e.vectors.adjoint()
    }

    /// Product of exponentials in listed order.
    pub fn rotation(&self, factors: &[(usize, T)]) -> DMatrix<Cplx<T>> {
        let n = self.dim();
        let mut u = DMatrix::<Cplx<T>>::identity(n, n);
        for &(k, t) in factors {
            u *= self.exp(k, t);
        }
        u
    }
}

/// Dense matrix of `r` on `modes` modes.
pub fn rotation_matrix<T: Real>(r: &MfRotation<T>, modes: usize) -> Result<DMatrix<Cplx<T>>> {
    let dim = 1usize << modes;
    let mut u = DMatrix::<Cplx<T>>::identity(dim, dim);
    let mut cache: Vec<Option<EigenSystem<T>>> = vec![None; r.basis().dim()];
    for &(k, theta) in r.factors() {
        if cache[k].is_none() {
            let m = to_matrix(r.basis().generator(k), modes)?.matrix;
            cache[k] = Some(hermitian_eigen(&(&m * cim(T::one()))));
        }
        let e = cache[k].as_ref().expect("filled above");
        let mut left = e.vectors.clone();
        for (c, &l) in e.values.iter().enumerate() {
            let a = -theta * l;
            let mut col = left.column_mut(c);
            col *= Cplx::new(a.cos(), a.sin());
        }
        u *= left * e.vectors.adjoint();
    }
    Ok(u)
}

/// Orbital rotation prod exp(kappa_pq theta_pq) exp(kappa'_pq phi_pq) over u(N), one
/// `(p, q, theta, phi)` entry per pair, in the listed order.
pub fn orbital_rotation<T: Real>(modes: usize, pairs: &[(usize, usize, T, T)]) -> Result<MfRotation<T>> {
    let basis = Arc::new(AlgebraBasis::unitary(modes));
    orbital_rotation_in(basis, pairs)
}

/// [`orbital_rotation`] over an existing u(N) basis.
pub fn orbital_rotation_in<T: Real>(
    basis: Arc<AlgebraBasis<T>>,
    pairs: &[(usize, usize, T, T)],
) -> Result<MfRotation<T>> {
    let mut factors = Vec::new();
    for &(p, q, theta, phi) in pairs {
        if p == q {
            return Err(Error::Invalid(format!("orbital rotation needs p != q, got ({p},{q})")));
        }
        // kappa_qp = -kappa_pq and kappa'_qp = kappa'_pq.
        let (a, b, sign) = if p < q { (p, q, T::one()) } else { (q, p, -T::one()) };
        let k = basis
            .index_of(&format!("kappa({a},{b})"))
            .ok_or_else(|| Error::Invalid(format!("no kappa({a},{b}) in basis")))?;
        let kp = basis
            .index_of(&format!("kappa'({a},{b})"))
            .ok_or_else(|| Error::Invalid(format!("no kappa'({a},{b}) in basis")))?;
        factors.push((k, theta * sign));
        factors.push((kp, phi));
    }
    MfRotation::new(basis, factors)
}

/// Quasi-particle transform B_q^dag = sum_p U_pq a_p^dag + V_pq a_p.
#[derive(Clone, Debug)]
pub struct BogoliubovTransform<T: Real> {
    pub u: DMatrix<Cplx<T>>,
    pub v: DMatrix<Cplx<T>>,
}

/// B^dag, B and the CSA {i B_p^dag B_p}.
#[derive(Clone, Debug)]
pub struct BogoliubovOperators<T: Real> {
    pub creators: Vec<OperatorPolynomial<T>>,
    pub annihilators: Vec<OperatorPolynomial<T>>,
    pub csa: Vec<OperatorPolynomial<T>>,
}

const BOGOLIUBOV_TOL: f64 = 1e-8;

impl<T: Real> BogoliubovTransform<T> {
    /// Validates the four canonical constraints at 1e-8.
    pub fn new(u: DMatrix<Cplx<T>>, v: DMatrix<Cplx<T>>) -> Result<Self> {
        if u.shape() != v.shape() || u.nrows() != u.ncols() {
            return Err(Error::Invalid("U and V must be square and of equal size".into()));
        }
        let t = BogoliubovTransform { u, v };
        let violated = t.violations(lit(BOGOLIUBOV_TOL));
        if !violated.is_empty() {
            return Err(Error::Bogoliubov(violated));
        }
        Ok(t)
    }

    pub fn modes(&self) -> usize {
        self.u.nrows()
    }

    /// Max-norm defects of U^dag U + V^dag V = 1, U U^dag + V* V^T = 1, U^T V + V^T U = 0 and
    /// U V^dag + V* U^T = 0.
    pub fn constraint_defects(&self) -> [T; 4] {
        let n = self.modes();
        let id = DMatrix::<Cplx<T>>::identity(n, n);
        let (u, v) = (&self.u, &self.v);
        let vc = v.conjugate();
        let max = |m: DMatrix<Cplx<T>>| m.iter().fold(T::zero(), |a, z| a.max(cabs(*z)));
        [
            max(u.adjoint() * u + v.adjoint() * v - &id),
            max(u * u.adjoint() + &vc * v.transpose() - &id),
            max(u.transpose() * v + v.transpose() * u),
            max(u * v.adjoint() + &vc * u.transpose()),
        ]
    }

    pub fn violations(&self, tol: T) -> Vec<String> {
        const NAMES: [&str; 4] = [
            "U^dag U + V^dag V = 1",
            "U U^dag + V* V^T = 1",
            "U^T V + V^T U = 0",
            "U V^dag + V* U^T = 0",
        ];
        self.constraint_defects()
            .iter()
            .zip(NAMES)
            .filter(|(d, _)| **d > tol)
            .map(|(d, name)| format!("{name} (defect {:.2e})", to_f64(*d)))
            .collect()
    }

    /// Diagonalizes the quadratic Hamiltonian sum h_pq a_p^dag a_q + (1/2) sum (D_pq a_p^dag a_q^dag + h.c.)
    /// through its Bogoliubov-de Gennes matrix; `delta` must be antisymmetric.
    pub fn from_quadratic(h: &DMatrix<Cplx<T>>, delta: &DMatrix<Cplx<T>>) -> Result<(Self, Vec<T>)> {
        let n = h.nrows();
        let mut bdg = DMatrix::<Cplx<T>>::zeros(2 * n, 2 * n);
        bdg.view_mut((0, 0), (n, n)).copy_from(h);
        bdg.view_mut((0, n), (n, n)).copy_from(delta);
        bdg.view_mut((n, 0), (n, n)).copy_from(&(-delta.conjugate()));
        bdg.view_mut((n, n), (n, n)).copy_from(&(-h.conjugate()));
        let eig = hermitian_eigen(&bdg);
        let u = DMatrix::from_fn(n, n, |p, q| eig.vectors[(p, n + q)]);
        let v = DMatrix::from_fn(n, n, |p, q| eig.vectors[(n + p, n + q)]);
        let energies = eig.values[n..].to_vec();
        Ok((BogoliubovTransform::new(u, v)?, energies))
    }
}

pub fn bogoliubov_generators<T: Real>(t: &BogoliubovTransform<T>) -> Result<BogoliubovOperators<T>> {
    let violated = t.violations(lit(BOGOLIUBOV_TOL));
    if !violated.is_empty() {
        return Err(Error::Bogoliubov(violated));
    }
    let n = t.modes();
    let mut creators = Vec::with_capacity(n);
    for q in 0..n {
        let mut b = OperatorPolynomial::zero(Family::Fermionic, n);
        for p in 0..n {
            b.axpy(t.u[(p, q)], &OperatorPolynomial::create(n, p + 1));
            b.axpy(t.v[(p, q)], &OperatorPolynomial::annihilate(n, p + 1));
        }
        creators.push(b);
    }
    let annihilators: Vec<_> = creators.iter().map(OperatorPolynomial::adjoint).collect();
    let csa = creators
        .iter()
        .zip(&annihilators)
        .map(|(c, a)| Ok(c.multiply(a)?.scale(cim(T::one()))))
        .collect::<Result<Vec<_>>>()?;
    Ok(BogoliubovOperators {
        creators,
        annihilators,
        csa,
    })
}

impl<T: Real> BogoliubovOperators<T> {
    /// Largest deviation from {B_p, B_q^dag} = delta_pq and {B_p, B_q} = 0.
    pub fn car_defect(&self) -> Result<T> {
        let n = self.creators.len();
        let mut worst = T::zero();
        for p in 0..n {
            for q in 0..n {
                let mut ac = self.annihilators[p].anticommutator(&self.creators[q])?;
                if p == q {
                    ac = ac.try_sub(&OperatorPolynomial::identity(Family::Fermionic, n))?;
                }
                worst = worst.max(ac.max_abs_coefficient());
                let aa = self.annihilators[p].anticommutator(&self.annihilators[q])?;
                worst = worst.max(aa.max_abs_coefficient());
            }
        }
        Ok(worst)
    }
}

/// Result of [`maximal_tori_diagonalize`].
#[derive(Clone, Debug)]
pub struct ToriDiagonalization<T: Real> {
    /// R with U^dag x U in the CSA span.
    pub rotation: MfRotation<T>,
    /// Coefficients b_l of the CSA elements.
    pub csa_coefficients: Vec<T>,
    /// Norm of the off-CSA coordinates left after rotation.
    pub residual: T,
    pub restarts: usize,
}

#[derive(Clone, Debug)]
pub struct ToriOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Relative tolerance on the off-CSA residual.
    pub tol: f64,
}

impl Default for ToriOptions {
    fn default() -> Self {
        ToriOptions {
            restarts: 16,
            seed: 0,
            tol: 1e-8,
        }
    }
}

struct ToriProblem<'a, T: Real> {
    c: &'a DVector<T>,
    ads: Vec<DMatrix<T>>,
    off: Vec<usize>,
}

impl<T: Real> ToriProblem<'_, T> {
    fn factors(&self, x: &[T]) -> Vec<DMatrix<T>> {
        self.ads.iter().zip(x).map(|(a, &t)| (a * (-t)).exp()).collect()
    }
}

impl<T: Real> LeastSquares<T> for ToriProblem<'_, T> {
    fn dim(&self) -> usize {
        self.ads.len()
    }

    fn residual(&mut self, x: &[T]) -> DVector<T> {
        let mut v = self.c.clone();
        for e in self.factors(x) {
            v = e * v;
        }
        DVector::from_iterator(self.off.len(), self.off.iter().map(|&k| v[k]))
    }

    fn jacobian(&mut self, x: &[T]) -> DMatrix<T> {
        let es = self.factors(x);
        let m = es.len();
        // v_k = E_k ... E_1 c
        let mut partial = Vec::with_capacity(m + 1);
        partial.push(self.c.clone());
        for e in &es {
            let next = e * partial.last().expect("non-empty");
            partial.push(next);
        }
        let mut jac = DMatrix::<T>::zeros(self.off.len(), m);
        for k in 0..m {
            // d v / d theta_k = E_m ... E_{k+1} (-ad_k) v_k
            let mut d = -(&self.ads[k] * &partial[k + 1]);
            for e in &es[k + 1..] {
                d = e * d;
            }
            for (row, &i) in self.off.iter().enumerate() {
                jac[(row, k)] = d[i];
            }
        }
        jac
    }
}

/// Rotates a linear element x = sum c_k A_k of a compact algebra into the CSA span
/// (maximal tori theorem). Only non-CSA generators are used, each once, in basis order.
pub fn maximal_tori_diagonalize<T: Real>(
    x: &OperatorPolynomial<T>,
    basis: Arc<AlgebraBasis<T>>,
    opts: &ToriOptions,
) -> Result<ToriDiagonalization<T>> {
    let c = basis.real_coordinates(x)?;
    let r = basis.csa_dim();
    let n = basis.dim();
    let gens: Vec<usize> = (r..n).collect();
    let norm = c.norm();
    let mut problem = ToriProblem {
        c: &c,
        ads: gens.iter().map(|&k| basis.ad_matrix(k)).collect(),
        off: (r..n).collect(),
    };
    let target = lit::<T>(opts.tol) * norm;
    let lm = LmOptions {
        cost_tol: (target * lit(1e-2)) * (target * lit(1e-2)),
        ..LmOptions::default()
    };
    let mut gen = rng(opts.seed);
    let mut best: Option<(Vec<T>, T)> = None;
    let mut used = 0;
    for attempt in 0..opts.restarts.max(1) {
        used = attempt + 1;
        let x0 = if attempt == 0 {
            vec![T::zero(); gens.len()]
        } else {
            random_angles(&mut gen, gens.len())
        };
        let out = levenberg_marquardt(&mut problem, &x0, &lm);
        let res = out.cost.sqrt();
        if best.as_ref().is_none_or(|b| res < b.1) {
            best = Some((out.x, res));
        }
        if res <= target {
            break;
        }
    }
    let (angles, residual) = best.expect("at least one start");
    if residual > target {
        return Err(Error::Optimizer(format!(
            "off-CSA residual {:.3e} above {:.3e} after {used} restarts",
            to_f64(residual),
            to_f64(target)
        )));
    }
    let rotation = MfRotation::new(basis.clone(), gens.into_iter().zip(angles).collect())?;
    let v = rotation.adjoint_matrix() * &c;
    Ok(ToriDiagonalization {
        rotation,
        csa_coefficients: (0..r).map(|k| v[k]).collect(),
        residual,
        restarts: used,
    })
}

/// `||A - B||_max` for dense matrices.
pub fn matrix_distance<T: Real>(a: &DMatrix<Cplx<T>>, b: &DMatrix<Cplx<T>>) -> T {
    (a - b).iter().fold(T::zero(), |m, z| m.max(cabs(*z)))
}

/// Unitarity defect `||U U^dag - 1||_max`.
pub fn unitarity_defect<T: Real>(u: &DMatrix<Cplx<T>>) -> T {
    let n = u.nrows();
    matrix_distance(&(u * u.adjoint()), &DMatrix::identity(n, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::Axis;

    type P = OperatorPolynomial<f64>;

    #[test]
    fn bloch_rotation_about_y() {
        let basis = Arc::new(AlgebraBasis::<f64>::su2_sum(1));
        let theta = 0.7;
        let r = MfRotation::from_labels(basis, &[("iy(1)", theta / 2.0)]).unwrap();
        let z = P::pauli(1, 1, Axis::Z);
        let out = r.apply(&z).unwrap();
        let expected = &z.scale_real(theta.cos()) + &P::pauli(1, 1, Axis::X).scale_real(theta.sin());
        assert!(out.approx_eq(&expected, 1e-12));
    }

    #[test]
    fn swap_by_quarter_turn() {
        let r = orbital_rotation(2, &[(1, 2, std::f64::consts::PI, 0.0)]).unwrap();
        let out = r.apply(&P::number(2, 1)).unwrap();
        assert!(out.approx_eq(&P::number(2, 2), 1e-12));
    }

    #[test]
    fn identity_rotation() {
        let basis = Arc::new(AlgebraBasis::<f64>::unitary(2));
        let r = MfRotation::identity(basis);
        let m = r.matrix().unwrap();
        assert!(unitarity_defect(&m) < 1e-14);
        assert!(matrix_distance(&m, &DMatrix::identity(4, 4)) < 1e-14);
        let h = P::excitation(2, 1, 2);
        assert_eq!(r.apply(&h).unwrap(), h);
    }

    #[test]
    fn record_round_trip() {
        let basis = Arc::new(AlgebraBasis::<f64>::unitary(3));
        let r = orbital_rotation_in(basis.clone(), &[(1, 2, -2.214, 0.1), (2, 3, 0.5, 0.0)]).unwrap();
        let back = MfRotation::from_record(basis, &r.to_record()).unwrap();
        assert_eq!(back.factors(), r.factors());
    }

    #[test]
    fn particle_hole_bogoliubov() {
        let n = 2;
        let u = DMatrix::<Cplx<f64>>::zeros(n, n);
        let v = DMatrix::<Cplx<f64>>::identity(n, n);
        let t = BogoliubovTransform::new(u, v).unwrap();
        let ops = bogoliubov_generators(&t).unwrap();
        assert!(ops.creators[0].approx_eq(&P::annihilate(2, 1), 1e-14));
        assert!(ops.car_defect().unwrap() < 1e-14);
    }

    #[test]
    fn bogoliubov_violation_listed() {
        let n = 2;
        let u = DMatrix::<Cplx<f64>>::identity(n, n);
        let v = DMatrix::<Cplx<f64>>::identity(n, n);
        match BogoliubovTransform::new(u, v) {
            Err(Error::Bogoliubov(list)) => assert!(list.len() >= 2),
            other => panic!("expected constraint error, got {other:?}"),
        }
    }

    #[test]
    fn tori_on_ix() {
        let basis = Arc::new(AlgebraBasis::<f64>::su2_sum(1));
        let x = P::pauli(1, 1, Axis::X).scale(P::i());
        let out = maximal_tori_diagonalize(&x, basis, &ToriOptions::default()).unwrap();
        assert!((out.csa_coefficients[0].abs() - 1.0).abs() < 1e-8);
        assert!(out.residual < 1e-8);
    }
}
