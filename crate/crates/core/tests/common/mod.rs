//! Randomized property suites shared by the property tests and the
//! acceptance runner. Each suite runs [`CASES`] cases and reports the first
//! failing input.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use ratsos::certificate::{two_squares_product, SquareTerm};
use ratsos::gram::{certificate_to_gram, gram_to_certificate, ldl, GramMatrix};
use ratsos::parse_io::{parse_poly, parse_structured, render_structured};
use ratsos::positivity::{isolate_roots, sturm_count, Bound};
use ratsos::projectlift::{inverse_kronecker, power_sequence, within_digit_bounds};
use ratsos::ratpoly::{substitute_powers, Monomial};
use ratsos::{MultiCertificate, MultiPoly, Rational, UniCertificate, UniPoly};

pub const CASES: u32 = 256;

pub type Suite = fn() -> Result<(), String>;

/// Name and runner of every suite.
pub const SUITES: &[(&str, Suite)] = &[
    (
        "sturm count matches constructed roots",
        sturm_vs_constructed_roots,
    ),
    ("div_rem and gcd ring identities", div_rem_gcd_identities),
    (
        "substitute_powers is a ring map compatible with eval",
        substitution_homomorphism,
    ),
    (
        "LDL reconstructs and Gram round trip verifies",
        ldl_and_gram_round_trip,
    ),
    (
        "Kronecker substitute/inverse round trip",
        kronecker_round_trip,
    ),
    ("two-squares product identity", two_squares_identity),
    (
        "verifier rejects single-coefficient perturbations",
        verifier_perturbation,
    ),
    (
        "parse and structured render round trip",
        parse_render_round_trip,
    ),
];

fn run<S: Strategy>(
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |r| !r.is_zero())
}

pub fn uni_poly(max_len: usize) -> impl Strategy<Value = UniPoly> {
    proptest::collection::vec(small_rational(), 0..=max_len).prop_map(UniPoly::new)
}

fn vars(n: usize) -> Vec<String> {
    ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
}

pub fn multi_poly(
    nvars: usize,
    max_exp: u32,
    max_terms: usize,
) -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec(
        (
            proptest::collection::vec(0..=max_exp, nvars),
            small_rational(),
        ),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        MultiPoly::from_terms(
            vars(nvars),
            terms.into_iter().map(|(e, c)| (Monomial(e), c)),
        )
    })
}

fn linear(root: i64) -> UniPoly {
    UniPoly::new(vec![
        Rational::from_integer(BigInt::from(-root)),
        Rational::one(),
    ])
}

/// `(x - a)² + b` with `b > 0`.
fn irreducible_quadratic(a: &Rational, b: &Rational) -> UniPoly {
    let shifted = UniPoly::new(vec![-a.clone(), Rational::one()]);
    &shifted.square() + &UniPoly::constant(b.clone())
}

pub fn sturm_vs_constructed_roots() -> Result<(), String> {
    let roots = proptest::collection::btree_map(-15i64..=15, 1u32..=3, 0..=4);
    let quads = proptest::collection::vec((small_rational(), nonzero_rational()), 0..=2);
    run(
        (roots, quads, nonzero_rational()),
        |(roots, quads, lead)| {
            let mut p = UniPoly::constant(lead);
            for (&r, &m) in &roots {
                p = &p * &linear(r).pow(m);
            }
            for (a, b) in &quads {
                p = &p * &irreducible_quadratic(a, &b.abs());
            }
            let n = sturm_count(&p, &Bound::NegInf, &Bound::PosInf)
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(n, roots.len());
            let intervals = isolate_roots(&p).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(intervals.len(), roots.len());
            for ((lo, hi), (&r, _)) in intervals.iter().zip(&roots) {
                let r = Rational::from_integer(BigInt::from(r));
                prop_assert!(lo < &r && &r <= hi);
            }
            Ok(())
        },
    )
}

pub fn div_rem_gcd_identities() -> Result<(), String> {
    run((uni_poly(7), uni_poly(5), uni_poly(3)), |(a, b, c)| {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&b * &q) + &r, a.clone());
        prop_assert!(r.is_zero() || r.degree() < b.degree());
        let g = a.gcd(&b).unwrap();
        prop_assert_eq!(g.leading_coeff(), Some(&Rational::one()));
        prop_assert!(a.rem(&g).unwrap().is_zero());
        prop_assert!(b.rem(&g).unwrap().is_zero());
        prop_assume!(!c.is_zero());
        let gc = (&a * &c).gcd(&(&b * &c)).unwrap();
        prop_assert_eq!(gc, &g * &c.monic());
        Ok(())
    })
}

pub fn substitution_homomorphism() -> Result<(), String> {
    let ks = proptest::collection::vec(1u64..=6, 2);
    run(
        (
            multi_poly(2, 4, 5),
            multi_poly(2, 4, 5),
            ks,
            small_rational(),
        ),
        |(p, q, ks, t)| {
            let sp = substitute_powers(&p, &ks);
            let sq = substitute_powers(&q, &ks);
            prop_assert_eq!(substitute_powers(&(&p + &q), &ks), &sp + &sq);
            prop_assert_eq!(substitute_powers(&(&p * &q), &ks), &sp * &sq);
            let point: Vec<Rational> = ks.iter().map(|&k| pow(&t, k)).collect();
            prop_assert_eq!(sp.eval(&t), p.eval(&point));
            Ok(())
        },
    )
}

fn pow(t: &Rational, k: u64) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * t)
}

pub fn ldl_and_gram_round_trip() -> Result<(), String> {
    let shape = (1usize..=5).prop_flat_map(|n| {
        (
            proptest::collection::vec(small_rational(), n * (n - 1) / 2),
            proptest::collection::vec((0i64..=9, 1i64..=4), n),
        )
    });
    run(shape, |(below, pivots)| {
        let n = pivots.len();
        let mut l = vec![vec![Rational::zero(); n]; n];
        let mut it = below.into_iter();
        for (i, row) in l.iter_mut().enumerate() {
            row[i] = Rational::one();
            for v in row.iter_mut().take(i) {
                *v = it.next().unwrap();
            }
        }
        let d: Vec<Rational> = pivots
            .iter()
            .map(|&(a, b)| Rational::new(BigInt::from(a), BigInt::from(b)))
            .collect();
        let a: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(Rational::zero(), |acc, k| acc + &l[i][k] * &d[k] * &l[j][k])
                    })
                    .collect()
            })
            .collect();
        let basis: Vec<u64> = (0..n as u64).rev().collect();
        let g = GramMatrix::new(a.clone(), basis).unwrap();
        let f = ldl(&g).unwrap();
        prop_assert_eq!(f.reconstruct(), a);
        let p = g.quadratic_form();
        let cert = gram_to_certificate(&g, &p).unwrap();
        prop_assert!(cert.verify(&p));
        let back = certificate_to_gram(&cert);
        prop_assert_eq!(back.quadratic_form(), p);
        Ok(())
    })
}

pub fn kronecker_round_trip() -> Result<(), String> {
    run(multi_poly(3, 4, 6), |p| {
        prop_assume!(!p.is_zero());
        let k = power_sequence(&p).unwrap();
        prop_assume!(within_digit_bounds(&p, &k));
        let g = substitute_powers(&p, k.powers());
        prop_assert_eq!(inverse_kronecker(&g, &k, p.vars()), p);
        Ok(())
    })
}

pub fn two_squares_identity() -> Result<(), String> {
    run(
        (uni_poly(4), uni_poly(4), uni_poly(4), uni_poly(4)),
        |(a, b, c, d)| {
            let (u, v) = two_squares_product(&a, &b, &c, &d);
            let lhs = &(&a.square() + &b.square()) * &(&c.square() + &d.square());
            prop_assert_eq!(lhs, &u.square() + &v.square());
            Ok(())
        },
    )
}

pub fn verifier_perturbation() -> Result<(), String> {
    let terms = proptest::collection::vec((1i64..=9, 1i64..=4, uni_poly(5)), 1..=4);
    run(
        (terms, 0i64..=5, 0usize..=12, nonzero_rational()),
        |(terms, c0, at, delta)| {
            let cert = UniCertificate::new(
                Rational::one(),
                terms
                    .into_iter()
                    .map(|(n, d, q)| {
                        SquareTerm::new(Rational::new(BigInt::from(n), BigInt::from(d)), q)
                    })
                    .collect(),
                Rational::from_integer(BigInt::from(c0)),
            );
            let p = cert.expand(&UniPoly::zero());
            prop_assert!(cert.verify(&p));
            let bumped = &p + &UniPoly::monomial(delta, at);
            prop_assert!(!cert.verify(&bumped));
            Ok(())
        },
    )
}

pub fn parse_render_round_trip() -> Result<(), String> {
    let terms = proptest::collection::vec((1i64..=9, 1i64..=4, multi_poly(2, 3, 4)), 0..=3);
    run((multi_poly(3, 5, 8), terms, 0i64..=7), |(p, terms, c0)| {
        prop_assert_eq!(parse_poly(&p.to_string(), p.vars()).unwrap(), p.clone());
        let cert = MultiCertificate::new(
            Rational::new(BigInt::from(3), BigInt::from(2)),
            terms
                .into_iter()
                .map(|(n, d, q)| {
                    SquareTerm::new(Rational::new(BigInt::from(n), BigInt::from(d)), q)
                })
                .collect(),
            Rational::from_integer(BigInt::from(c0)),
        )
        .with_support(vec![0, 2])
        .with_strategy("core_zero");
        let text = render_structured(&cert, &vars(2), "input", true);
        let (_, back) = parse_structured(&text).unwrap();
        prop_assert_eq!(back, cert);
        Ok(())
    })
}
