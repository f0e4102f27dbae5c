//! Scalar and coefficient traits.
//!
//! Analysis code is generic over a real floating type `T` (`f32` or `f64`)
//! and works with `Complex<T>`. Exact input preprocessing uses complex
//! numbers with arbitrary-precision rational parts.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::{ComplexField, RealField};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use crate::poly::Polynomial;

/// Real floating scalar driving all numerical analysis.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Display + Debug + Send + Sync + 'static
{
    /// Machine epsilon as `f64`.
    fn eps() -> f64;

    /// Relative tolerance below which coefficients are dropped during
    /// polynomial trimming and content removal.
    fn trim_tolerance() -> f64 {
        (64.0 * Self::eps()).max(1e-12)
    }

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }
}

impl Real for f64 {
    fn eps() -> f64 {
        f64::EPSILON
    }
}

impl Real for f32 {
    fn eps() -> f64 {
        f32::EPSILON as f64
    }
}

/// Exact complex rational number.
pub type ExactComplex = Complex<BigRational>;

/// Field of coefficients for polynomials, rational functions and operators.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Modulus as `f64`, used for scaling decisions.
    fn magnitude(&self) -> f64;

    /// Whether `self` is indistinguishable from zero next to a quantity of size `scale`.
    fn negligible(&self, scale: f64) -> bool;

    fn from_int(n: i64) -> Self;

    fn from_exact(z: &ExactComplex) -> Self;

    /// Monic greatest common divisor. Both inputs nonzero.
    fn poly_gcd(a: &Polynomial<Self>, b: &Polynomial<Self>) -> Polynomial<Self>;
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl Coefficient for ExactComplex {
    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.re).hypot(rational_to_f64(&self.im))
    }

    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn from_int(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    fn from_exact(z: &ExactComplex) -> Self {
        z.clone()
    }

    fn poly_gcd(a: &Polynomial<Self>, b: &Polynomial<Self>) -> Polynomial<Self> {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }
}

impl<T: Real> Coefficient for Complex<T> {
    fn magnitude(&self) -> f64 {
        self.modulus().to_f64().unwrap_or(f64::NAN)
    }

    fn negligible(&self, scale: f64) -> bool {
        self.magnitude() <= T::trim_tolerance() * scale
    }

    fn from_int(n: i64) -> Self {
        Complex::new(T::from_i64(n).expect("integer fits"), T::zero())
    }

    fn from_exact(z: &ExactComplex) -> Self {
        Complex::new(
            T::of(rational_to_f64(&z.re)),
            T::of(rational_to_f64(&z.im)),
        )
    }

    fn poly_gcd(a: &Polynomial<Self>, b: &Polynomial<Self>) -> Polynomial<Self> {
        crate::roots::approximate_gcd(a, b)
    }
}

/// `Complex<T>` from an `f64` pair.
pub fn cx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}

/// Modulus as `f64`.
pub fn abs<T: Real>(z: Complex<T>) -> f64 {
    z.modulus().to_f64().unwrap_or(f64::NAN)
}

/// `exp(2πi·z)`.
pub fn exp_2pi_i<T: Real>(z: Complex<T>) -> Complex<T> {
    let two_pi = T::two_pi();
    (Complex::new(T::zero(), two_pi) * z).exp()
}

pub fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

pub fn from_c64<T: Real>(z: Complex<f64>) -> Complex<T> {
    cx(z.re, z.im)
}
