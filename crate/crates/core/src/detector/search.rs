//! Variance minimization over mean-field rotations.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{GeneratorMatrices, MfRotation};
use crate::ops::{AlgebraBasis, Family, OperatorPolynomial};
use crate::optim::{levenberg_marquardt, random_angles, rng, LeastSquares, LmOptions};
use crate::rep::{hermitian_eigen, to_matrix, variance, CsaEigenstate};
use crate::scalar::{cabs, lit, Cplx, Real};

/// Residuals (H - E_J) V e_J over a set of columns J, with V = prod_k exp(theta_k A_k) over the
/// chosen generators. Their squared norm is the sum of the variances of the states V e_J.
pub(crate) struct ColumnProblem<'a, T: Real> {
    pub h: &'a DMatrix<Cplx<T>>,
    pub gm: &'a GeneratorMatrices<T>,
    pub gens: &'a [usize],
    pub cols: Vec<usize>,
}

impl<T: Real> ColumnProblem<'_, T> {
    fn exps(&self, x: &[T]) -> Vec<DMatrix<Cplx<T>>> {
        self.gens.iter().zip(x).map(|(&k, &t)| self.gm.exp(k, t)).collect()
    }

    pub fn unitary(&self, x: &[T]) -> DMatrix<Cplx<T>> {
        let d = self.h.nrows();
        self.exps(x)
            .into_iter()
            .fold(DMatrix::identity(d, d), |acc, e| acc * e)
    }
}

impl<T: Real> LeastSquares<T> for ColumnProblem<'_, T> {
    fn dim(&self) -> usize {
        self.gens.len()
    }

    fn residual(&mut self, x: &[T]) -> DVector<T> {
        let v = self.unitary(x);
        let d = self.h.nrows();
        let mut out = DVector::<T>::zeros(2 * d * self.cols.len());
        for (c, &j) in self.cols.iter().enumerate() {
            let psi = v.column(j);
            let hpsi = self.h * psi;
            let e = psi.dotc(&hpsi).re;
            for r in 0..d {
                let z = hpsi[r] - psi[r] * e;
                out[2 * (c * d + r)] = z.re;
                out[2 * (c * d + r) + 1] = z.im;
            }
        }
        out
    }

    fn jacobian(&mut self, x: &[T]) -> DMatrix<T> {
        let d = self.h.nrows();
        let n = self.gens.len();
        let es = self.exps(x);
        // prefix[k] = E_1 ... E_{k}, prefix[0] = I
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(DMatrix::<Cplx<T>>::identity(d, d));
        for e in &es {
            let next = prefix.last().expect("non-empty") * e;
            prefix.push(next);
        }
        // suffix[k] = (E_{k+1} ... E_n)[:, cols]
        let mut sel = DMatrix::<Cplx<T>>::zeros(d, self.cols.len());
        for (c, &j) in self.cols.iter().enumerate() {
            sel[(j, c)] = Cplx::new(T::one(), T::zero());
        }
        let mut suffix = vec![sel; n + 1];
        for k in (0..n).rev() {
            suffix[k] = &es[k] * &suffix[k + 1];
        }
        let v = &prefix[n];
        let psis: Vec<_> = self.cols.iter().map(|&j| v.column(j).into_owned()).collect();
        let hpsis: Vec<_> = psis.iter().map(|p| self.h * p).collect();
        let energies: Vec<T> = psis.iter().zip(&hpsis).map(|(p, hp)| p.dotc(hp).re).collect();
        let mut jac = DMatrix::<T>::zeros(2 * d * self.cols.len(), n);
        for k in 0..n {
            // dV/dtheta_k = E_1 ... E_{k-1} A_k E_k ... E_n
            let dv = &prefix[k] * (&self.gm.matrices[self.gens[k]] * &suffix[k]);
            for c in 0..self.cols.len() {
                let dpsi = dv.column(c);
                let de = dpsi.dotc(&hpsis[c]).re * lit(2.0);
                let hd = self.h * dpsi;
                for r in 0..d {
                    let z = hd[r] - dpsi[r] * energies[c] - psis[c][r] * de;
                    jac[(2 * (c * d + r), k)] = z.re;
                    jac[(2 * (c * d + r) + 1, k)] = z.im;
                }
            }
        }
        jac
    }
}

/// Variance of every column of `v` in `cols`, with the energies.
pub(crate) fn column_variances<T: Real>(
    h: &DMatrix<Cplx<T>>,
    v: &DMatrix<Cplx<T>>,
    cols: &[usize],
) -> Vec<(usize, T, T)> {
    cols.iter()
        .map(|&j| {
            let psi = v.column(j);
            let hpsi = h * psi;
            let e = psi.dotc(&hpsi).re;
            let r = hpsi - psi * Cplx::new(e, T::zero());
            (j, r.norm_squared(), e)
        })
        .collect()
}

pub(crate) fn lm_options<T: Real>(norm: T) -> LmOptions<T> {
    let floor = norm * lit(1e-13);
    LmOptions {
        max_iterations: 200,
        cost_tol: floor * floor,
        gradient_tol: norm * norm * lit(1e-22),
        step_tol: lit(1e-14),
    }
}

/// Result of [`minimize_variance`].
#[derive(Clone, Debug)]
pub struct VarianceMinimum<T: Real> {
    /// V with the candidate eigenstate V|ref>.
    pub rotation: MfRotation<T>,
    /// <ref|V^dag H^2 V|ref> - <ref|V^dag H V|ref>^2, evaluated on the dense matrices.
    pub variance: T,
    pub energy: T,
    pub restarts: usize,
    pub state: DVector<Cplx<T>>,
}

/// The largest absolute eigenvalue.
pub(crate) fn spectral_norm<T: Real>(h: &DMatrix<Cplx<T>>) -> T {
    hermitian_eigen(h)
        .values
        .iter()
        .fold(T::zero(), |m, v| m.max(v.abs()))
}

pub(crate) fn matrix_for<T: Real>(
    h: &OperatorPolynomial<T>,
    basis: &AlgebraBasis<T>,
) -> Result<DMatrix<Cplx<T>>> {
    let compatible = match (h.family(), basis.family()) {
        (a, b) if a == b => true,
        (Family::Fermionic, Family::Majorana) | (Family::Majorana, Family::Fermionic) => true,
        _ => false,
    };
    if !compatible {
        return Err(Error::FamilyMismatch {
            left: basis.family(),
            right: h.family(),
        });
    }
    if h.modes() > basis.modes() {
        return Err(Error::ModeMismatch {
            left: basis.modes(),
            right: h.modes(),
        });
    }
    let rep = to_matrix(h, basis.modes())?;
    let defect = rep.hermiticity_defect();
    if defect > lit::<T>(1e-10) * (T::one() + h.max_abs_coefficient()) {
        return Err(Error::NotHermitian(crate::scalar::to_f64(defect)));
    }
    Ok(rep.matrix)
}

/// Minimizes the variance of H on V|ref> over MF rotations V = prod exp(theta_k A_k), starting
/// from theta = 0 and then from `budget` uniformly random angle sets. Stops at the first start
/// reaching zero variance (relative tolerance `tol_variance`).
pub fn minimize_variance<T: Real>(
    h: &OperatorPolynomial<T>,
    reference: &CsaEigenstate<T>,
    basis: Arc<AlgebraBasis<T>>,
    budget: usize,
    seed: u64,
    tol_variance: f64,
) -> Result<VarianceMinimum<T>> {
    let m = matrix_for(h, &basis)?;
    let gm = GeneratorMatrices::new(&basis, basis.modes())?;
    let gens: Vec<usize> = (0..basis.dim()).collect();
    let norm = spectral_norm(&m);
    let mut gen = rng(seed);
    let found = single_column(&m, &gm, &gens, reference.index, None, budget, norm, tol_variance, &mut gen);
    let (Ok((angles, restarts)) | Err((angles, restarts))) = found;
    let rotation = MfRotation::new(basis, gens.into_iter().zip(angles).collect())?;
    let v = rotation.matrix()?;
    let state = v.column(reference.index).into_owned();
    Ok(VarianceMinimum {
        variance: variance(&m, &state)?,
        energy: crate::rep::expectation(&m, &state)?,
        rotation,
        restarts,
        state,
    })
}

/// LM on one column from `start` (or zero) and then random restarts. `Ok` on zero variance,
/// `Err` with the best angles otherwise; both carry the number of starts used.
#[allow(clippy::too_many_arguments)]
pub(crate) fn single_column<T: Real>(
    h: &DMatrix<Cplx<T>>,
    gm: &GeneratorMatrices<T>,
    gens: &[usize],
    column: usize,
    start: Option<&[T]>,
    budget: usize,
    norm: T,
    tol_variance: f64,
    gen: &mut ChaCha8Rng,
) -> std::result::Result<(Vec<T>, usize), (Vec<T>, usize)> {
    let threshold = lit::<T>(tol_variance) * norm * norm;
    let mut problem = ColumnProblem {
        h,
        gm,
        gens,
        cols: vec![column],
    };
    let opts = lm_options(norm);
    let mut best: Option<(Vec<T>, T)> = None;
    for attempt in 0..=budget {
        let x0 = match (attempt, start) {
            (0, Some(s)) => s.to_vec(),
            (0, None) => vec![T::zero(); gens.len()],
            _ => random_angles(gen, gens.len()),
        };
        let out = levenberg_marquardt(&mut problem, &x0, &opts);
        if out.cost <= threshold {
            return Ok((out.x, attempt + 1));
        }
        if best.as_ref().is_none_or(|b| out.cost < b.1) {
            best = Some((out.x, out.cost));
        }
    }
    Err((best.map(|b| b.0).unwrap_or_default(), budget + 1))
}

/// Columns of `v` among `active` whose variance is within tolerance.
pub(crate) fn eigen_columns<T: Real>(
    h: &DMatrix<Cplx<T>>,
    v: &DMatrix<Cplx<T>>,
    active: &[usize],
    threshold: T,
) -> Vec<usize> {
    column_variances(h, v, active)
        .into_iter()
        .filter(|(_, var, _)| *var <= threshold)
        .map(|(j, _, _)| j)
        .collect()
}

/// max |[M, P]| for a 0/1 diagonal projector.
pub(crate) fn mask_commutator<T: Real>(m: &DMatrix<Cplx<T>>, mask: &[bool]) -> T {
    let mut worst = T::zero();
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            if mask[r] != mask[c] {
                worst = worst.max(cabs(m[(r, c)]));
            }
        }
    }
    worst
}
