//! Scalar abstraction shared by every numeric routine in the crate.

use nalgebra::{ComplexField, RealField};
use num_complex::Complex;
use num_traits::ToPrimitive;

/// Real scalar type the algebra and the numerics are generic over (`f32` or `f64`).
pub trait Real: RealField + Copy + ToPrimitive + Send + Sync {}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over `T`.
pub type Cplx<T> = Complex<T>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn abs<T: Real>(x: T) -> T {
    ComplexField::abs(x)
}

#[inline]
pub fn cabs<T: Real>(z: Cplx<T>) -> T {
    z.norm_sqr().sqrt()
}

#[inline]
pub fn cre<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn cim<T: Real>(x: T) -> Cplx<T> {
    Complex::new(T::zero(), x)
}

/// Coefficients below this magnitude are dropped after every simplification.
pub const COEFF_TOL: f64 = 1e-12;
