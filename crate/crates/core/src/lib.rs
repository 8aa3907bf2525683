//! Exact sum-of-squares certificates for nonnegative rational polynomials.
//!
//! The crate decides positive (semi)definiteness of univariate polynomials
//! with Sturm sequences and builds certificates
//!
//! ```text
//! p = scale · ( Σ dⱼ·qⱼ² + c₀ )
//! ```
//!
//! in which every number is rational. Univariate certificates come from a
//! degree-descending triangular solve over a lower-triangular coefficient
//! layout ([`ddp`]); multivariate inputs are projected to one variable by a
//! power substitution, certified there, and lifted back ([`projectlift`]).
//! Every certificate is checked by exact expansion before it leaves the
//! library.
//!
//! The arithmetic layer is generic over [`Scalar`]; the aliases below fix it
//! to arbitrary-precision rationals, which is what the decision procedures
//! need.

pub mod certificate;
pub mod ddp;
pub mod gram;
pub mod parse_io;
pub mod pipeline;
pub mod positivity;
pub mod projectlift;
pub mod ratpoly;
pub mod scalar;

pub use scalar::Scalar;

/// Exact rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;
/// Dense univariate rational polynomial.
pub type UniPoly = ratpoly::UniPolynomial<Rational>;
/// Sparse multivariate rational polynomial.
pub type MultiPoly = ratpoly::MultiPolynomial<Rational>;
/// Univariate rational certificate.
pub type UniCertificate = certificate::SosCertificate<UniPoly>;
/// Multivariate rational certificate.
pub type MultiCertificate = certificate::SosCertificate<MultiPoly>;
/// Rational Gram matrix.
pub type GramMatrix = gram::GramMatrix<Rational>;
