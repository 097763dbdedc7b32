//! Scalar fields used throughout the crate.
//!
//! Three kinds of scalars appear: exact Gaussian rationals, exact rational
//! functions of `z` over the Gaussian rationals, and `f64` complex numbers.
//! Matrices and loops are generic over [`Scalar`]; algorithms that need
//! exact zero tests (Smith form, exact width computations) require the
//! [`Exact`] marker.

mod gauss;
mod integrate;
mod poly;
mod ratfun;

use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub use gauss::{GaussianRational, ParseScalarError};
pub use integrate::{hermite_reduce, integrate_rational, HermiteReduction, NonRationalAntiderivative};
pub use poly::Poly;
pub use ratfun::RatFun;

/// Polynomials in `z` with Gaussian-rational coefficients.
pub type GPoly = Poly<GaussianRational>;

/// A commutative field with conjugation.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + Sub<Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + Mul<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Neg<Output = Self>
{
    /// True when zero tests are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;

    /// Absolute value for numeric kinds; exact kinds return 0 or 1.
    fn magnitude(&self) -> f64;

    /// Complex conjugate with respect to the compact real form, when it is
    /// expressible in the same scalar kind.
    fn conj(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.clone() * r)
    }
}

/// Marker for scalars with exact arithmetic.
pub trait Exact: Scalar {}

/// Conversion to a complex number, optionally substituting a value for `z`.
pub trait ToComplex {
    /// Returns `None` at a pole or when `z` is required but absent.
    fn to_complex(&self, z: Option<Complex64>) -> Option<Complex64>;
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn magnitude(&self) -> f64 {
        libm::hypot(self.re, self.im)
    }
    fn conj(&self) -> Option<Self> {
        Some(Complex64::new(self.re, -self.im))
    }
}

impl ToComplex for Complex64 {
    fn to_complex(&self, _z: Option<Complex64>) -> Option<Complex64> {
        Some(*self)
    }
}
