//! Gram matrices over a monomial basis and their exact `L·D·Lᵀ`
//! factorization.
//!
//! `p = X·B·Xᵀ` with `X = (t^{b₀}, t^{b₁}, ...)`. A factorization
//! `B = L·diag(d)·Lᵀ` with unit lower-triangular `L` and `d ≥ 0` turns into
//! the certificate `p = Σ dⱼ·(X·L[:, j])²` without square roots.

use thiserror::Error;

use crate::certificate::{SosCertificate, SquareTerm};
use crate::ratpoly::UniPolynomial;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GramError<T: Scalar> {
    #[error("matrix is not square with one row per basis exponent")]
    Shape,
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("basis exponents must be strictly decreasing")]
    BasisOrder,
    #[error("X·B·Xᵀ differs from the polynomial at exponent {exponent}")]
    BasisMismatch { exponent: usize },
    #[error("not positive semidefinite: {0}")]
    NotPsd(NotPsd<T>),
}

/// Why elimination stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum NotPsd<T> {
    /// Pivot `index` is negative after eliminating the rows above it.
    NegativePivot { index: usize, pivot: T },
    /// Pivot `index` is zero but entry `(row, index)` below it is not.
    ZeroPivot { index: usize, row: usize },
}

impl<T: Scalar> std::fmt::Display for NotPsd<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NotPsd::NegativePivot { index, pivot } => write!(f, "pivot {index} is {pivot}"),
            NotPsd::ZeroPivot { index, row } => {
                write!(f, "pivot {index} is zero but entry ({row}, {index}) is not")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T> {
    entries: Vec<Vec<T>>,
    basis: Vec<u64>,
}

impl<T: Scalar> GramMatrix<T> {
    /// Checks shape, symmetry and that `basis` is strictly decreasing.
    #[allow(clippy::needless_range_loop)]
    pub fn new(entries: Vec<Vec<T>>, basis: Vec<u64>) -> Result<Self, GramError<T>> {
        let n = basis.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(GramError::Shape);
        }
        if basis.windows(2).any(|w| w[0] <= w[1]) {
            return Err(GramError::BasisOrder);
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(GramError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { entries, basis })
    }

    pub fn zero(basis: Vec<u64>) -> Result<Self, GramError<T>> {
        let n = basis.len();
        Self::new(vec![vec![T::zero(); n]; n], basis)
    }

    pub fn order(&self) -> usize {
        self.basis.len()
    }

    pub fn entries(&self) -> &[Vec<T>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.entries[i][j]
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    /// `X·B·Xᵀ`.
    pub fn quadratic_form(&self) -> UniPolynomial<T> {
        let mut terms = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                terms.push(((self.basis[i] + self.basis[j]) as usize, v.clone()));
            }
        }
        UniPolynomial::from_terms(terms)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LdlResult<T> {
    /// Row-major, unit diagonal, zero above it.
    pub unit_lower: Vec<Vec<T>>,
    pub pivots: Vec<T>,
}

impl<T: Scalar> LdlResult<T> {
    /// `L·diag(d)·Lᵀ`.
    pub fn reconstruct(&self) -> Vec<Vec<T>> {
        let n = self.pivots.len();
        let l = &self.unit_lower;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(T::zero(), |acc, k| {
                            acc + l[i][k].clone() * self.pivots[k].clone() * l[j][k].clone()
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

/// Exact `L·D·Lᵀ` without pivoting. Zero pivots are accepted only when the
/// rest of their column is zero.
#[allow(clippy::needless_range_loop)]
pub fn ldl<T: Scalar>(b: &GramMatrix<T>) -> Result<LdlResult<T>, GramError<T>> {
    let n = b.order();
    let mut a = b.entries.clone();
    let mut l = vec![vec![T::zero(); n]; n];
    let mut pivots = Vec::with_capacity(n);
    for j in 0..n {
        let pivot = a[j][j].clone();
        if pivot.is_negative() {
            return Err(GramError::NotPsd(NotPsd::NegativePivot { index: j, pivot }));
        }
        l[j][j] = T::one();
        if pivot.is_zero() {
            if let Some(row) = (j + 1..n).find(|&i| !a[i][j].is_zero()) {
                return Err(GramError::NotPsd(NotPsd::ZeroPivot { index: j, row }));
            }
        } else {
            for i in j + 1..n {
                l[i][j] = a[i][j].clone() / pivot.clone();
            }
            for i in j + 1..n {
                if l[i][j].is_zero() {
                    continue;
                }
                for k in j + 1..=i {
                    let v = l[i][j].clone() * a[k][j].clone();
                    a[i][k] = a[i][k].clone() - v.clone();
                    if k != i {
                        a[k][i] = a[k][i].clone() - v;
                    }
                }
            }
        }
        pivots.push(pivot);
    }
    Ok(LdlResult {
        unit_lower: l,
        pivots,
    })
}

/// Certificate from a Gram matrix of `p`. Squares of constants are folded
/// into the certificate constant.
pub fn gram_to_certificate<T: Scalar>(
    b: &GramMatrix<T>,
    p: &UniPolynomial<T>,
) -> Result<SosCertificate<UniPolynomial<T>>, GramError<T>> {
    let form = b.quadratic_form();
    let top = form.degree().max(p.degree()).unwrap_or(0);
    if let Some(exponent) = (0..=top).find(|&e| form.coeff(e) != p.coeff(e)) {
        return Err(GramError::BasisMismatch { exponent });
    }
    let f = ldl(b)?;
    let n = b.order();
    let mut terms = Vec::new();
    let mut constant = T::zero();
    for j in 0..n {
        let d = &f.pivots[j];
        if d.is_zero() {
            continue;
        }
        let q = UniPolynomial::from_terms(
            (j..n).map(|i| (b.basis[i] as usize, f.unit_lower[i][j].clone())),
        );
        if q.is_constant() {
            let c = q.coeff(0);
            constant = constant + d.clone() * c.clone() * c;
        } else {
            terms.push(SquareTerm::new(d.clone(), q));
        }
    }
    let mut support = b.basis.clone();
    support.reverse();
    Ok(SosCertificate::new(T::one(), terms, constant)
        .with_support(support)
        .with_strategy("gram"))
}

/// Gram matrix of a univariate certificate over the union of its exponents
/// (and 0 for a nonzero constant), in decreasing order.
pub fn certificate_to_gram<T: Scalar>(cert: &SosCertificate<UniPolynomial<T>>) -> GramMatrix<T> {
    let mut basis: Vec<u64> = cert
        .terms
        .iter()
        .flat_map(|t| t.poly.terms().map(|(e, _)| e as u64).collect::<Vec<_>>())
        .collect();
    if !cert.constant.is_zero() {
        basis.push(0);
    }
    basis.sort_unstable_by(|a, b| b.cmp(a));
    basis.dedup();
    let n = basis.len();
    let index = |e: usize| {
        basis
            .iter()
            .position(|&b| b == e as u64)
            .expect("exponent in basis")
    };
    let mut entries = vec![vec![T::zero(); n]; n];
    let mut add = |d: &T, v: &[(usize, T)]| {
        for (i, a) in v {
            for (j, b) in v {
                let w = d.clone() * a.clone() * b.clone() * cert.scale.clone();
                entries[*i][*j] = entries[*i][*j].clone() + w;
            }
        }
    };
    for t in &cert.terms {
        let v: Vec<(usize, T)> = t.poly.terms().map(|(e, c)| (index(e), c.clone())).collect();
        add(&t.multiplier, &v);
    }
    if !cert.constant.is_zero() {
        add(&cert.constant, &[(index(0), T::one())]);
    }
    GramMatrix { entries, basis }
}
