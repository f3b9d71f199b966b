//! Scalar abstraction for the core numerics.

use nalgebra::{ComplexField, RealField};
use num_complex::Complex;
use num_traits::FromPrimitive;

/// Working scalar type: `f32` or `f64` in practice.
pub trait Scalar: RealField + FromPrimitive + Copy {}

impl<T: RealField + FromPrimitive + Copy> Scalar for T {}

/// Convert an `f64` constant into the working scalar.
#[inline]
pub fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("constant not representable in scalar type")
}

/// e^{i theta}
#[inline]
pub fn cis<T: Scalar>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// |z|
#[inline]
pub fn cabs<T: Scalar>(z: Complex<T>) -> T {
    ComplexField::modulus(z)
}

/// |z|^2
#[inline]
pub fn cabs2<T: Scalar>(z: Complex<T>) -> T {
    ComplexField::modulus_squared(z)
}

/// z^n for a non-negative integer power.
#[inline]
pub fn cpow<T: Scalar>(z: Complex<T>, n: usize) -> Complex<T> {
    ComplexField::powi(z, n as i32)
}
