use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::PolyError;
use crate::scalar::Scalar;

/// Exponent vector of a monomial, one entry per variable.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of the first variable, then the second, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn all_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over named, ordered variables.
///
/// Zero coefficients are never stored. Iteration follows the graded-lex
/// order of [`Monomial`]; display lists terms from the largest down.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPolynomial<T> {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> MultiPolynomial<T> {
    pub fn zero(vars: Vec<String>) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vec<String>, c: T) -> Self {
        let n = vars.len();
        Self::from_terms(vars, [(Monomial::one(n), c)])
    }

    /// The polynomial consisting of variable `index`.
    pub fn var(vars: Vec<String>, index: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[index] = 1;
        Self::from_terms(vars, [(Monomial(exps), T::one())])
    }

    /// Builds from `(monomial, coefficient)` pairs; repeated monomials add.
    ///
    /// Panics if a monomial's length differs from the number of variables.
    pub fn from_terms<I>(vars: Vec<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, T)>,
    {
        let mut out = Self::zero(vars);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    /// Adds `c·m` in place.
    pub fn add_term(&mut self, m: Monomial, c: T) {
        assert_eq!(m.0.len(), self.vars.len(), "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    pub fn constant_value(&self) -> Option<T> {
        match self.terms.len() {
            0 => Some(T::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Checks that two polynomials live over the same variables.
    pub fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            })
        }
    }

    /// Evaluates at a point given in variable order.
    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.vars.len(), "point dimension");
        self.terms.iter().fold(T::zero(), |acc, (m, c)| {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    v = v * x.clone();
                }
            }
            acc + v
        })
    }
}

fn assert_same_vars<T: Scalar>(a: &MultiPolynomial<T>, b: &MultiPolynomial<T>) {
    assert!(
        a.vars == b.vars,
        "variable lists differ: {:?} vs {:?}",
        a.vars,
        b.vars
    );
}

impl<T: Scalar> Add for &MultiPolynomial<T> {
    type Output = MultiPolynomial<T>;

    fn add(self, rhs: Self) -> MultiPolynomial<T> {
        assert_same_vars(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &MultiPolynomial<T> {
    type Output = MultiPolynomial<T>;

    fn sub(self, rhs: Self) -> MultiPolynomial<T> {
        assert_same_vars(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<T: Scalar> Mul for &MultiPolynomial<T> {
    type Output = MultiPolynomial<T>;

    fn mul(self, rhs: Self) -> MultiPolynomial<T> {
        assert_same_vars(self, rhs);
        let mut out = MultiPolynomial::zero(self.vars.clone());
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.add_term(ma.mul(mb), a.clone() * b.clone());
            }
        }
        out
    }
}

impl<T: Scalar> Neg for &MultiPolynomial<T> {
    type Output = MultiPolynomial<T>;

    fn neg(self) -> MultiPolynomial<T> {
        self.scale(&-T::one())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<T: Scalar> $tr for MultiPolynomial<T> {
            type Output = MultiPolynomial<T>;
            fn $m(self, rhs: Self) -> MultiPolynomial<T> {
                (&self).$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl<T: Scalar> fmt::Display for MultiPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            let powers: Vec<String> = self
                .vars
                .iter()
                .zip(&m.0)
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            if powers.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&powers.join("*"))?;
            } else {
                write!(f, "{mag}*{}", powers.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for MultiPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPolynomial[{}]({self})", self.vars.join(","))
    }
}
