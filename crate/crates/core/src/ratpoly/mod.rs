//! Polynomial arithmetic: dense univariate, sparse multivariate, the
//! power substitution between them, and the shared [`PolyRing`] interface
//! the certificate code is written against.

mod multi;
mod uni;

pub use multi::{Monomial, MultiPolynomial};
pub use uni::UniPolynomial;

use std::fmt::Debug;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("division leaves a nonzero remainder")]
    Inexact,
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
}

/// Ring operations common to both polynomial representations.
pub trait PolyRing: Clone + PartialEq + Debug {
    type Scalar: Scalar;

    /// Zero in the same polynomial ring (same variables).
    fn zero_like(&self) -> Self;
    fn constant_like(&self, c: Self::Scalar) -> Self;
    fn is_zero_poly(&self) -> bool;
    /// `Some(c)` when the polynomial is the constant `c`.
    fn as_constant(&self) -> Option<Self::Scalar>;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn scaled(&self, c: &Self::Scalar) -> Self;
}

impl<T: Scalar> PolyRing for UniPolynomial<T> {
    type Scalar = T;

    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn constant_like(&self, c: T) -> Self {
        Self::constant(c)
    }
    fn is_zero_poly(&self) -> bool {
        self.is_zero()
    }
    fn as_constant(&self) -> Option<T> {
        self.is_constant().then(|| self.coeff(0))
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scaled(&self, c: &T) -> Self {
        self.scale(c)
    }
}

impl<T: Scalar> PolyRing for MultiPolynomial<T> {
    type Scalar = T;

    fn zero_like(&self) -> Self {
        Self::zero(self.vars().to_vec())
    }
    fn constant_like(&self, c: T) -> Self {
        Self::constant(self.vars().to_vec(), c)
    }
    fn is_zero_poly(&self) -> bool {
        self.is_zero()
    }
    fn as_constant(&self) -> Option<T> {
        self.constant_value()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scaled(&self, c: &T) -> Self {
        self.scale(c)
    }
}

/// Expands `Σ bₖ·qₖ² + c₀` exactly. `zero` fixes the ring (and, for
/// multivariate polynomials, the variable list).
pub fn expand_square_sum<P: PolyRing>(
    zero: &P,
    terms: &[(P::Scalar, P)],
    constant: &P::Scalar,
) -> P {
    let mut acc = zero.constant_like(constant.clone());
    for (b, q) in terms {
        acc = acc.plus(&q.times(q).scaled(b));
    }
    acc
}

/// Maps every monomial `x₁^{d₁}…xₙ^{dₙ}` to `t^{Σ kᵢdᵢ}`; images that
/// collide add their coefficients.
///
/// Panics if `powers` does not have one entry per variable.
pub fn substitute_powers<T: Scalar>(p: &MultiPolynomial<T>, powers: &[u64]) -> UniPolynomial<T> {
    assert_eq!(powers.len(), p.nvars(), "one power per variable");
    UniPolynomial::from_terms(p.terms().map(|(m, c)| {
        let e: u64 =
            m.0.iter()
                .zip(powers)
                .map(|(&d, &k)| u64::from(d) * k)
                .sum();
        (e as usize, c.clone())
    }))
}

/// Reinterprets a univariate polynomial as a one-variable multivariate one.
pub fn uni_to_multi<T: Scalar>(p: &UniPolynomial<T>, var: &str) -> MultiPolynomial<T> {
    MultiPolynomial::from_terms(
        vec![var.to_string()],
        p.terms()
            .map(|(e, c)| (Monomial(vec![e as u32]), c.clone())),
    )
}

/// Inverse of [`uni_to_multi`]; `None` if there is not exactly one variable.
pub fn multi_to_uni<T: Scalar>(p: &MultiPolynomial<T>) -> Option<UniPolynomial<T>> {
    if p.nvars() != 1 {
        return None;
    }
    Some(UniPolynomial::from_terms(
        p.terms().map(|(m, c)| (m.0[0] as usize, c.clone())),
    ))
}
