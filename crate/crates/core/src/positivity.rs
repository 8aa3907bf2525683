//! Real-root counting and definiteness decisions for univariate rational
//! polynomials, plus the two factor splits the certificate pipeline uses.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{int, midpoint};
use crate::{Rational, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PositivityError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is negative at {witness}")]
    NotNonnegative { witness: Rational },
}

/// Interval endpoint for [`sturm_count`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    At(Rational),
    PosInf,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::At(r) => write!(f, "{r}"),
            Bound::PosInf => f.write_str("+inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    PositiveDefinite,
    PositiveSemiDefinite,
    NotNonnegative,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::PositiveDefinite => "PositiveDefinite",
            Classification::PositiveSemiDefinite => "PositiveSemiDefinite",
            Classification::NotNonnegative => "NotNonnegative",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitenessReport {
    pub classification: Classification,
    /// Distinct real roots.
    pub real_root_count: usize,
    /// A point where the polynomial is negative; present iff `NotNonnegative`.
    pub witness: Option<Rational>,
}

/// `p = square_part² · definite_part` with `definite_part` positive definite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareSplit {
    pub square_part: UniPoly,
    pub definite_part: UniPoly,
}

/// `p = g²·q + m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSplit {
    pub g: UniPoly,
    pub q: UniPoly,
    pub m: Rational,
}

/// Scales by a positive rational so the coefficients become coprime
/// integers. Signs are preserved, which is all a Sturm chain needs.
pub fn primitive_part(p: &UniPoly) -> UniPoly {
    if p.is_zero() {
        return p.clone();
    }
    let den = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let num = p.coeffs().iter().fold(BigInt::zero(), |acc, c| {
        acc.gcd(&(c.numer() * &den / c.denom()))
    });
    p.scale(&Rational::new(den, num))
}

/// `p / gcd(p, p')`, made primitive.
pub fn squarefree_part(p: &UniPoly) -> Result<UniPoly, PositivityError> {
    if p.is_zero() {
        return Err(PositivityError::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(UniPoly::one());
    }
    let g = p.gcd(&p.derivative()).expect("p is nonzero");
    Ok(primitive_part(&p.exact_div(&g).expect("gcd divides p")))
}

/// Sturm chain `p, p', -rem(...)...` with every member made primitive.
pub fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![primitive_part(p)];
    let d = primitive_part(&p.derivative());
    if d.is_zero() {
        return chain;
    }
    chain.push(d);
    loop {
        let n = chain.len();
        let r = chain[n - 2]
            .rem(&chain[n - 1])
            .expect("chain members are nonzero");
        if r.is_zero() {
            break;
        }
        chain.push(primitive_part(&-r));
    }
    chain
}

fn sign_at(p: &UniPoly, b: &Bound) -> i8 {
    let sgn = |r: &Rational| -> i8 {
        if r.is_positive() {
            1
        } else if r.is_negative() {
            -1
        } else {
            0
        }
    };
    match b {
        Bound::At(x) => sgn(&p.eval(x)),
        Bound::PosInf => p.leading_coeff().map_or(0, sgn),
        Bound::NegInf => {
            let s = p.leading_coeff().map_or(0, sgn);
            if p.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        }
    }
}

fn variations(chain: &[UniPoly], b: &Bound) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for q in chain {
        let s = sign_at(q, b);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn chain_count(chain: &[UniPoly], lo: &Bound, hi: &Bound) -> usize {
    variations(chain, lo).saturating_sub(variations(chain, hi))
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_count(p: &UniPoly, lo: &Bound, hi: &Bound) -> Result<usize, PositivityError> {
    let sf = squarefree_part(p)?;
    if sf.is_constant() {
        return Ok(0);
    }
    Ok(chain_count(&sturm_chain(&sf), lo, hi))
}

/// A strict bound on the absolute value of every real root.
fn cauchy_bound(p: &UniPoly) -> Rational {
    let lc = p.leading_coeff().expect("nonzero").abs();
    let n = p.degree().unwrap_or(0);
    let max = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs() / lc.clone())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    max + int(1)
}

/// Disjoint intervals `(a, b]`, in ascending order, each holding exactly one
/// distinct real root of `p`. No endpoint is a root.
pub fn isolate_roots(p: &UniPoly) -> Result<Vec<(Rational, Rational)>, PositivityError> {
    let sf = squarefree_part(p)?;
    if sf.is_constant() {
        return Ok(Vec::new());
    }
    let chain = sturm_chain(&sf);
    let b = cauchy_bound(&sf);
    let count = |a: &Rational, b: &Rational| {
        chain_count(&chain, &Bound::At(a.clone()), &Bound::At(b.clone()))
    };
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b.clone(), count(&-b.clone(), &b))];
    while let Some((a, b, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let mut m = midpoint(&a, &b);
                while sf.eval(&m).is_zero() {
                    m = midpoint(&a, &m);
                }
                let left = count(&a, &m);
                // Right half pushed first so the left half is refined first.
                stack.push((m.clone(), b, n - left));
                stack.push((a, m, left));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}

/// Decides whether `p` is positive definite, semidefinite, or somewhere
/// negative, with an exact witness in the last case.
pub fn classify(p: &UniPoly) -> Result<DefinitenessReport, PositivityError> {
    if p.is_zero() {
        return Err(PositivityError::ZeroPolynomial);
    }
    let intervals = isolate_roots(p)?;
    let samples: Vec<Rational> = if intervals.is_empty() {
        vec![Rational::zero()]
    } else {
        intervals
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    };
    let witness = samples.into_iter().find(|x| p.eval(x).is_negative());
    let n = intervals.len();
    let classification = match (&witness, n) {
        (Some(_), _) => Classification::NotNonnegative,
        (None, 0) => Classification::PositiveDefinite,
        (None, _) => Classification::PositiveSemiDefinite,
    };
    Ok(DefinitenessReport {
        classification,
        real_root_count: n,
        witness,
    })
}

/// Yun's squarefree decomposition of a monic polynomial: `f = Π fᵢ^i`,
/// returned as `[f₁, f₂, ...]`.
pub fn squarefree_decomposition(f: &UniPoly) -> Vec<UniPoly> {
    let f = f.monic();
    if f.is_constant() {
        return Vec::new();
    }
    let df = f.derivative();
    let a0 = f.gcd(&df).expect("nonzero");
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let c = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    while !b.is_constant() {
        let a = b.gcd(&d).expect("b nonconstant");
        b = b.exact_div(&a).expect("gcd divides");
        let c = d.exact_div(&a).expect("gcd divides");
        d = &c - &b.derivative();
        out.push(a);
    }
    while out.last().is_some_and(UniPoly::is_constant) {
        out.pop();
    }
    out
}

/// Splits a nonnegative `p` as `s²·p₁` with `p₁` positive definite.
pub fn square_factor_split(p: &UniPoly) -> Result<SquareSplit, PositivityError> {
    let report = classify(p)?;
    if let Some(w) = report.witness {
        return Err(PositivityError::NotNonnegative { witness: w });
    }
    let lc = p.leading_coeff().expect("nonzero").clone();
    let mut s = UniPoly::one();
    let mut p1 = UniPoly::constant(lc);
    for (i, f) in squarefree_decomposition(p).iter().enumerate() {
        let mult = i as u32 + 1;
        if mult / 2 > 0 {
            s = &s * &f.pow(mult / 2);
        }
        if mult % 2 == 1 {
            p1 = &p1 * f;
        }
    }
    Ok(SquareSplit {
        square_part: s,
        definite_part: p1,
    })
}

/// `p = g²·q + m` with `g` a common factor of `p - m` and `p'`.
///
/// `g = gcd(p, p')` is tried first (then `m = 0` unless the remainder says
/// otherwise). When `p` and `p'` are coprime, `m` is sought among the
/// critical values of `p`: each real root of `p'` is refined, `p` is
/// evaluated there and rounded to a nearby small-height rational, and the
/// candidate is kept only if `gcd(p - m, p')` is nonconstant and its square
/// divides `p - m` exactly, and only if the cofactor `q` is nonconstant.
/// Candidates are tried in ascending value.
pub fn min_shift_split(p: &UniPoly) -> Option<ShiftSplit> {
    if p.is_constant() {
        return None;
    }
    let dp = p.derivative();
    if let Some(split) = split_with(p, &p.gcd(&dp).ok()?) {
        return Some(split);
    }
    let mut values: Vec<Rational> = isolate_roots(&dp)
        .ok()?
        .into_iter()
        .filter_map(|(a, b)| critical_value(p, &dp, a, b))
        .collect();
    values.sort();
    values.dedup();
    values.into_iter().find_map(|m| {
        let shifted = p - &UniPoly::constant(m);
        split_with(p, &shifted.gcd(&dp).ok()?).filter(|s| !s.q.is_constant())
    })
}

fn split_with(p: &UniPoly, g: &UniPoly) -> Option<ShiftSplit> {
    if g.is_constant() {
        return None;
    }
    let g2 = g.square();
    let r = p.rem(&g2).ok()?;
    if !r.is_constant() {
        return None;
    }
    let m = r.coeff(0);
    let q = (p - &UniPoly::constant(m.clone())).exact_div(&g2).ok()?;
    Some(ShiftSplit { g: g.clone(), q, m })
}

/// Bisections applied to a critical point before `p` is evaluated there.
const REFINE_STEPS: usize = 96;

/// A small-height rational near `p` at the root of `dp` isolated in `(a, b]`.
fn critical_value(p: &UniPoly, dp: &UniPoly, mut a: Rational, mut b: Rational) -> Option<Rational> {
    let sf = squarefree_part(dp).ok()?;
    let sa = sf.eval(&a).is_positive();
    for _ in 0..REFINE_STEPS {
        let m = midpoint(&a, &b);
        let v = sf.eval(&m);
        if v.is_zero() {
            return Some(p.eval(&m));
        }
        if v.is_positive() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    let approx = p.eval(&midpoint(&a, &b));
    let tol = Rational::new(BigInt::one(), BigInt::one() << 48);
    nearby_rational(&approx, &tol, &(BigInt::one() << 24))
}

/// First continued-fraction convergent of `v` within `tol`, provided its
/// denominator stays at most `max_den`.
fn nearby_rational(v: &Rational, tol: &Rational, max_den: &BigInt) -> Option<Rational> {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut x = v.clone();
    loop {
        let a = x.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > max_den {
            return None;
        }
        let c = Rational::new(h2.clone(), k2.clone());
        if (&c - v).abs() <= *tol {
            return Some(c);
        }
        let frac = &x - Rational::from_integer(a);
        if frac.is_zero() {
            return None;
        }
        x = frac.recip();
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
}
