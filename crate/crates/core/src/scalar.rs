//! Scalar abstraction shared by the polynomial and matrix code.
//!
//! Everything in the arithmetic layer is written against [`Scalar`], an
//! ordered field. The decision procedures and certificate search run on
//! [`Rational`](crate::Rational) because they rely on exact equality, but the
//! ring operations, Gram factorization and certificate expansion work for any
//! ordered field (`f64`, `Ratio<i64>`, ...).

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

/// An ordered field.
pub trait Scalar: Clone + Debug + Display + PartialOrd + Num + Signed {
    /// Embeds a small integer.
    fn from_i64(v: i64) -> Self {
        let mut out = Self::zero();
        let step = if v < 0 { -Self::one() } else { Self::one() };
        // Double-and-add keeps this O(log v) for any field.
        let mut base = step;
        let mut n = v.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                out = out + base.clone();
            }
            base = base.clone() + base;
            n >>= 1;
        }
        out
    }
}

impl<T> Scalar for T where T: Clone + Debug + Display + PartialOrd + Num + Signed {}

/// Builds an exact rational `num/den`.
///
/// Panics when `den == 0`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an exact integer rational.
pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Formats a rational as `num/den` with an explicit denominator, even for
/// integers. This is the lossless form used by the structured wire format.
pub fn to_fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Formats a rational compactly: integers without a denominator.
pub fn to_compact_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n`, `-n`, `n/d` or `-n/d` with decimal integers.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Midpoint of two rationals.
pub fn midpoint(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / int(2)
}
