//! Scalar arithmetic shared by the whole crate.
//!
//! Two fields are in play: exact rationals for everything where ranks and
//! ideal membership must be decided exactly, and complex doubles for variety
//! points, dual spaces and the coefficients of converted diagonal ROABPs.
//! All polynomial and matrix code is generic over [`Scalar`]; the exact and
//! numeric layers differ only in which extra kernels they get.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact rational scalar (always reduced, positive denominator — maintained
/// by `num-rational`).
pub type Rational = BigRational;

/// Complex double-precision scalar.
pub type ComplexF = Complex64;

/// Field operations required by the generic matrix/polynomial kernels.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Embeds an exact integer; lossy only for the numeric field.
    fn from_bigint(v: &BigInt) -> Self;

    /// Embeds a rational; lossy only for the numeric field.
    fn from_rational(v: &Rational) -> Self;

    /// |x| as a double, used for pivot selection and tolerance checks.
    fn magnitude(&self) -> f64;

    /// Whether arithmetic in this field is exact.
    fn is_exact() -> bool;

    /// Numeric image of the scalar.
    fn to_complex(&self) -> ComplexF;
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_rational(v: &Rational) -> Self {
        v.clone()
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }

    fn is_exact() -> bool {
        true
    }

    fn to_complex(&self) -> ComplexF {
        Complex64::new(rational_to_f64(self), 0.0)
    }
}

impl Scalar for ComplexF {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_bigint(v: &BigInt) -> Self {
        Complex64::new(v.to_f64().unwrap_or(f64::INFINITY), 0.0)
    }

    fn from_rational(v: &Rational) -> Self {
        Complex64::new(rational_to_f64(v), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn is_exact() -> bool {
        false
    }

    fn to_complex(&self) -> ComplexF {
        *self
    }
}

/// Conversion that stays finite for rationals far outside the f64 range.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back to a quotient of rounded parts; good enough for pivot ranking.
    let num = r.numer().to_f64().unwrap_or(if r.numer().is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    });
    let den = r.denom().to_f64().unwrap_or(f64::INFINITY);
    num / den
}

/// Parses "p/q" or "p" into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Canonical "p/q" form used in all JSON output.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// e! as an exact integer.
pub fn factorial(e: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=e as u64 {
        acc *= k;
    }
    acc
}

/// Falling factorial e!/(e-a)!; zero when a > e.
pub fn falling_factorial(e: u32, a: u32) -> BigInt {
    if a > e {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for k in (e - a + 1)..=e {
        acc *= k as u64;
    }
    acc
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}
