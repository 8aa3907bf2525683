//! Certificate data model and the exact verifier.
//!
//! A certificate asserts `p = scale · (Σ dⱼ·qⱼ² + c₀)` with `scale > 0`,
//! every `dⱼ > 0` and `c₀ ≥ 0`. [`SosCertificate::verify`] expands the right
//! hand side and compares coefficients exactly; nothing produced by this
//! crate is returned without passing it.

use num_traits::{One, Signed, Zero};

use crate::ratpoly::PolyRing;

/// One weighted square `multiplier · poly²`.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareTerm<P: PolyRing> {
    pub multiplier: P::Scalar,
    pub poly: P,
}

impl<P: PolyRing> SquareTerm<P> {
    pub fn new(multiplier: P::Scalar, poly: P) -> Self {
        Self { multiplier, poly }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SosCertificate<P: PolyRing> {
    /// Global positive factor in front of the sum.
    pub scale: P::Scalar,
    pub terms: Vec<SquareTerm<P>>,
    /// The nonnegative constant `c₀`, kept apart from the squares.
    pub constant: P::Scalar,
    /// Exponents of the monomial basis the squares were built over.
    pub support: Vec<u64>,
    /// Free-form provenance: strategy, grid point. Not part of the identity.
    pub strategy: String,
}

impl<P: PolyRing> SosCertificate<P> {
    pub fn new(scale: P::Scalar, terms: Vec<SquareTerm<P>>, constant: P::Scalar) -> Self {
        Self {
            scale,
            terms,
            constant,
            support: Vec::new(),
            strategy: String::new(),
        }
    }

    /// The certificate of a nonnegative constant.
    pub fn constant_only(c: P::Scalar) -> Self {
        Self::new(P::Scalar::one(), Vec::new(), c)
    }

    pub fn with_support(mut self, support: Vec<u64>) -> Self {
        self.support = support;
        self
    }

    pub fn with_strategy(mut self, strategy: impl Into<String>) -> Self {
        self.strategy = strategy.into();
        self
    }

    /// `scale > 0`, every multiplier `> 0`, `constant ≥ 0`.
    pub fn signs_ok(&self) -> bool {
        self.scale.is_positive()
            && !self.constant.is_negative()
            && self.terms.iter().all(|t| t.multiplier.is_positive())
    }

    /// The right-hand side, expanded. `zero` fixes the polynomial ring.
    pub fn expand(&self, zero: &P) -> P {
        let mut acc = zero.constant_like(self.constant.clone());
        for t in &self.terms {
            acc = acc.plus(&t.poly.times(&t.poly).scaled(&t.multiplier));
        }
        acc.scaled(&self.scale)
    }

    /// Exact check that the certificate proves `p ≥ 0`.
    pub fn verify(&self, p: &P) -> bool {
        self.signs_ok() && self.expand(&p.zero_like()) == *p
    }

    /// Certificate for `s²·p₁` from a certificate for `p₁`: every square is
    /// multiplied by `s` and the constant becomes the square term `(c₀, s)`.
    pub fn compose_with_square(&self, s: &P) -> Self {
        let mut out = self.clone();
        if let Some(sigma) = s.as_constant() {
            // s constant: the identity scales by σ², keep the same shape.
            let sigma2 = sigma.clone() * sigma;
            out.scale = out.scale * sigma2;
            if out.scale.is_zero() {
                return Self::constant_only(P::Scalar::zero());
            }
            return out;
        }
        for t in &mut out.terms {
            t.poly = t.poly.times(s);
        }
        if !self.constant.is_zero() {
            out.terms
                .push(SquareTerm::new(self.constant.clone(), s.clone()));
        }
        out.constant = P::Scalar::zero();
        out.support.clear();
        out
    }

    /// Certificate for `p + m` from a certificate for `p` (`m ≥ 0`).
    pub fn add_constant(&self, m: &P::Scalar) -> Self {
        let mut out = self.clone();
        out.constant = out.constant + m.clone() / self.scale.clone();
        out
    }

    /// Number of square terms, counting a nonzero constant as one.
    pub fn square_count(&self) -> usize {
        self.terms.len() + usize::from(!self.constant.is_zero())
    }
}

/// Verifies `cert` against `p`; see [`SosCertificate::verify`].
pub fn verify<P: PolyRing>(cert: &SosCertificate<P>, p: &P) -> bool {
    cert.verify(p)
}

/// `(A²+B²)(C²+D²) = (AC+BD)² + (AD−BC)²`; returns `(AC+BD, AD−BC)`.
pub fn two_squares_product<P: PolyRing>(a: &P, b: &P, c: &P, d: &P) -> (P, P) {
    let e = a.times(c).plus(&b.times(d));
    let f = a.times(d).minus(&b.times(c));
    (e, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::{Rational, UniCertificate, UniPoly};

    fn p(cs: &[Rational]) -> UniPoly {
        UniPoly::new(cs.to_vec())
    }

    fn ints(cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|&c| int(c)).collect())
    }

    fn sextic() -> UniPoly {
        // x^6-2x^5+4x^4-6x^3+6x^2-4x+2
        ints(&[2, -4, 6, -6, 4, -2, 1])
    }

    fn sextic_certificate(constant: Rational) -> UniCertificate {
        UniCertificate::new(
            int(1),
            vec![
                SquareTerm::new(int(1), ints(&[-1, 1, -1, 1])),
                SquareTerm::new(int(1), p(&[rat(1, 2), int(-1), int(1)])),
                SquareTerm::new(int(1), p(&[rat(-1, 2), int(1)])),
            ],
            constant,
        )
    }

    #[test]
    fn verifies_three_square_sextic() {
        assert!(sextic_certificate(rat(1, 2)).verify(&sextic()));
    }

    #[test]
    fn perturbed_constant_fails() {
        assert!(!sextic_certificate(rat(1, 3)).verify(&sextic()));
    }

    #[test]
    fn negative_multiplier_fails_even_if_identity_holds() {
        // x^2 = 2·x² + (-1)·x²
        let c = UniCertificate::new(
            int(1),
            vec![
                SquareTerm::new(int(2), UniPoly::x()),
                SquareTerm::new(int(-1), UniPoly::x()),
            ],
            int(0),
        );
        assert_eq!(c.expand(&UniPoly::zero()), ints(&[0, 0, 1]));
        assert!(!c.verify(&ints(&[0, 0, 1])));
    }

    #[test]
    fn empty_certificate_verifies_zero() {
        assert!(UniCertificate::constant_only(int(0)).verify(&UniPoly::zero()));
    }

    #[test]
    fn two_squares_examples() {
        let x = UniPoly::x();
        let (e, f) = two_squares_product(&x, &ints(&[1]), &x, &ints(&[2]));
        assert_eq!(e, ints(&[2, 0, 1]));
        assert_eq!(f, ints(&[0, 1]));
        let lhs = &ints(&[1, 0, 1]) * &ints(&[4, 0, 1]);
        assert_eq!(lhs, &e.square() + &f.square());

        let one = UniPoly::one();
        let zero = UniPoly::zero();
        assert_eq!(
            two_squares_product(&one, &zero, &one, &zero),
            (one.clone(), zero.clone())
        );
        let (e, f) = two_squares_product(&zero, &zero, &x, &one);
        assert!(e.is_zero() && f.is_zero());
    }

    #[test]
    fn compose_with_square_factor() {
        // x²+1 = (x)² + 1, s = x²-3x+2
        let base = UniCertificate::new(int(1), vec![SquareTerm::new(int(1), UniPoly::x())], int(1));
        assert!(base.verify(&ints(&[1, 0, 1])));
        let s = ints(&[2, -3, 1]);
        let composed = base.compose_with_square(&s);
        let target = ints(&[4, -12, 17, -18, 14, -6, 1]);
        assert!(composed.verify(&target));
        assert_eq!(composed.terms[0].poly, ints(&[0, 2, -3, 1]));
        assert_eq!(composed.terms[1].poly, s);
        assert!(composed.constant.is_zero());
    }

    #[test]
    fn compose_with_unit_is_identity() {
        let base = sextic_certificate(rat(1, 2));
        let same = base.compose_with_square(&UniPoly::one());
        assert_eq!(same, base);
        assert!(same.verify(&sextic()));
    }

    #[test]
    fn add_constant_respects_scale() {
        let c = UniCertificate::new(int(2), vec![SquareTerm::new(int(1), UniPoly::x())], int(0));
        let shifted = c.add_constant(&int(1));
        assert!(shifted.verify(&ints(&[1, 0, 2])));
    }
}
