//! Levenberg-Marquardt least squares with analytic Jacobians and seeded random restarts.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::{lit, Real};

/// A residual vector r(x) with its Jacobian J_ij = d r_i / d x_j.
pub trait LeastSquares<T: Real> {
    fn dim(&self) -> usize;
    fn residual(&mut self, x: &[T]) -> DVector<T>;
    fn jacobian(&mut self, x: &[T]) -> DMatrix<T>;
}

#[derive(Clone, Debug)]
pub struct LmOptions<T: Real> {
    pub max_iterations: usize,
    /// Stop once ||r||^2 falls below this.
    pub cost_tol: T,
    /// Stop when the gradient J^T r is this small (max norm).
    pub gradient_tol: T,
    /// Stop when the relative step is this small.
    pub step_tol: T,
}

impl<T: Real> Default for LmOptions<T> {
    fn default() -> Self {
        LmOptions {
            max_iterations: 400,
            cost_tol: lit(1e-28),
            gradient_tol: lit(1e-20),
            step_tol: lit(1e-15),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LmOutcome<T: Real> {
    pub x: Vec<T>,
    /// ||r||^2 at `x`.
    pub cost: T,
    pub iterations: usize,
}

pub fn levenberg_marquardt<T: Real, P: LeastSquares<T>>(
    problem: &mut P,
    x0: &[T],
    opts: &LmOptions<T>,
) -> LmOutcome<T> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = problem.residual(&x);
    let mut cost = r.norm_squared();
    if n == 0 {
        return LmOutcome { x, cost, iterations: 0 };
    }
    let mut j = problem.jacobian(&x);
    let mut a = j.transpose() * &j;
    let mut g = j.transpose() * &r;
    let mut lambda = lit::<T>(1e-3) * a.diagonal().amax().max(lit(1e-12));
    let mut nu: T = lit(2.0);
    let mut it = 0;
    while it < opts.max_iterations {
        it += 1;
        if cost <= opts.cost_tol || g.amax() <= opts.gradient_tol {
            break;
        }
        let mut damped = a.clone();
        for k in 0..n {
            damped[(k, k)] += lambda;
        }
        let Some(chol) = damped.cholesky() else {
            lambda *= nu;
            nu *= lit(2.0);
            continue;
        };
        let delta = chol.solve(&(-&g));
        let x_norm = x.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt();
        if delta.norm() <= opts.step_tol * (x_norm + opts.step_tol) {
            break;
        }
        let trial: Vec<T> = x.iter().zip(delta.iter()).map(|(a, b)| *a + *b).collect();
        let r_new = problem.residual(&trial);
        let cost_new = r_new.norm_squared();
        // Predicted reduction of the quadratic model.
        let predicted = -(delta.dot(&g) * lit(2.0) + delta.dot(&(&a * &delta)));
        if cost_new < cost {
            let rho = if predicted > T::zero() {
                (cost - cost_new) / predicted
            } else {
                T::one()
            };
            x = trial;
            r = r_new;
            cost = cost_new;
            j = problem.jacobian(&x);
            a = j.transpose() * &j;
            g = j.transpose() * &r;
            let t = rho * lit(2.0) - T::one();
            let factor = (T::one() - t * t * t).max(lit(1.0 / 3.0));
            lambda *= factor;
            nu = lit(2.0);
        } else {
            lambda *= nu;
            nu *= lit(2.0);
            if lambda > lit(1e30) {
                break;
            }
        }
    }
    LmOutcome {
        x,
        cost,
        iterations: it,
    }
}

/// Deterministic generator for restart points.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform angles in [-pi, pi).
pub fn random_angles<T: Real, R: Rng>(rng: &mut R, n: usize) -> Vec<T> {
    (0..n)
        .map(|_| lit(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)))
        .collect()
}
