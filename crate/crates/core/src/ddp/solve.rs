use num_traits::{One, Signed, Zero};

use super::layout::Layout;
use super::{Assignment, Reject, SolveError, SupportSet};
use crate::certificate::SquareTerm;
use crate::{Rational, UniCertificate, UniPoly};

/// A fully determined scheme: every multiplier and lower entry.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularScheme {
    pub support: SupportSet,
    /// `dⱼ` by ascending row; the top entry is 1.
    pub multipliers: Vec<Rational>,
    /// `lower[j][k] = L[j][k]` for `k < j`.
    pub lower: Vec<Vec<Rational>>,
    /// Leading coefficient of the input, factored out in front.
    pub scale: Rational,
}

impl TriangularScheme {
    /// `qⱼ = t^{sⱼ} + Σ_{k<j} L[j][k]·t^{s_k}`.
    pub fn square(&self, row: usize) -> UniPoly {
        let s = self.support.powers();
        let mut terms = vec![(s[row] as usize, Rational::one())];
        terms.extend(
            self.lower[row]
                .iter()
                .enumerate()
                .map(|(k, v)| (s[k] as usize, v.clone())),
        );
        UniPoly::from_terms(terms)
    }

    /// Multiplier of the square led by `t^row`.
    pub fn multiplier(&self, row: u64) -> Option<&Rational> {
        let r = self.support.powers().binary_search(&row).ok()?;
        Some(&self.multipliers[r])
    }

    /// `L` entry for the square led by `t^row` at `t^col`.
    pub fn entry(&self, row: u64, col: u64) -> Option<&Rational> {
        let s = self.support.powers();
        let r = s.binary_search(&row).ok()?;
        let c = s.binary_search(&col).ok()?;
        self.lower[r].get(c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub scheme: TriangularScheme,
    /// The lowest multiplier `d₀`; the certificate constant when `s₀ = 0`.
    pub constant_square: Rational,
    pub certificate: UniCertificate,
}

/// Everything about `p` and its support that does not depend on the point.
#[derive(Clone, Debug)]
pub(crate) struct Problem<'a> {
    pub p: &'a UniPoly,
    pub lc: Rational,
    pub targets: Vec<Rational>,
    pub layout: Layout,
}

impl<'a> Problem<'a> {
    pub fn new(p: &'a UniPoly, support: &SupportSet) -> Result<Self, SolveError> {
        let deg = p.degree().ok_or(SolveError::ZeroPolynomial)?;
        if deg % 2 == 1 {
            return Err(SolveError::OddDegree(deg));
        }
        let lc = p.leading_coeff().expect("nonzero").clone();
        if !lc.is_positive() {
            return Err(SolveError::NonpositiveLeading);
        }
        let half = (deg / 2) as u64;
        if support.top() != half {
            return Err(SolveError::SupportMismatch {
                top: support.top(),
                half,
            });
        }
        let targets = (0..=deg).map(|e| p.coeff(e) / lc.clone()).collect();
        Ok(Self {
            p,
            lc,
            targets,
            layout: Layout::new(support),
        })
    }

    /// Slot values fixed by `pins`.
    pub fn pin_values(&self, pins: &Assignment) -> Result<Vec<Option<Rational>>, SolveError> {
        let layout = &self.layout;
        let mut values = vec![None; layout.slot_count()];
        let row = |e: u64| {
            layout
                .row_of(e)
                .ok_or_else(|| SolveError::BadPin(format!("no square is led by t^{e}")))
        };
        for (&e, v) in &pins.diagonal {
            let r = row(e)?;
            if r == layout.top_row() {
                return Err(SolveError::BadPin(format!(
                    "the top multiplier (t^{e}) is fixed"
                )));
            }
            if v.is_negative() {
                return Err(SolveError::BadPin(format!(
                    "multiplier for t^{e} is negative"
                )));
            }
            values[r] = Some(v.clone());
        }
        for (&(re, ce), v) in &pins.lower {
            let (r, c) = (row(re)?, row(ce)?);
            if c >= r {
                return Err(SolveError::BadPin(format!(
                    "entry ({re}, {ce}) is not below the diagonal"
                )));
            }
            let id = layout
                .slot_id(super::Slot::Lower { row: r, col: c })
                .expect("valid lower slot");
            values[id] = Some(v.clone());
        }
        Ok(values)
    }

    /// Runs the descending sweep; unknowns left open at the end become 0.
    pub fn sweep(&self, values: &mut [Option<Rational>]) -> Result<(), Reject> {
        self.sweep_range(values, 0..self.layout.equations.len())
    }

    /// Sweeps the equations whose exponents lie in `range`, highest first.
    pub fn sweep_range(
        &self,
        values: &mut [Option<Rational>],
        range: std::ops::Range<usize>,
    ) -> Result<(), Reject> {
        let top = self.layout.top_row();
        for e in range.rev() {
            let exponent = e as u64;
            let mut known = Rational::zero();
            let mut unknown: Option<usize> = None;
            let mut pivot = Rational::zero();
            let mut nonlinear = false;
            for term in &self.layout.equations[e] {
                let fs = term.factors();
                if fs
                    .iter()
                    .any(|&f| values[f].as_ref().is_some_and(Zero::is_zero))
                {
                    continue;
                }
                let mut prod = Rational::from_integer(term.coef.into());
                let mut unk: Option<usize> = None;
                let mut squared = false;
                for &f in fs {
                    match &values[f] {
                        Some(v) => prod *= v,
                        None => match unk {
                            None => unk = Some(f),
                            Some(u) if u == f => squared = true,
                            Some(_) => return Err(Reject::UnderDetermined { exponent }),
                        },
                    }
                }
                match unk {
                    None => known += prod,
                    Some(u) => {
                        if unknown.is_some_and(|x| x != u) {
                            return Err(Reject::UnderDetermined { exponent });
                        }
                        unknown = Some(u);
                        if squared {
                            nonlinear = true;
                        } else {
                            pivot += prod;
                        }
                    }
                }
            }
            let target = &self.targets[e];
            match unknown {
                None if known != *target => return Err(Reject::Mismatch { exponent }),
                None => {}
                Some(_) if nonlinear => return Err(Reject::Nonlinear { exponent }),
                Some(u) => {
                    let rhs = target - known;
                    if pivot.is_zero() {
                        if !rhs.is_zero() {
                            return Err(Reject::ZeroPivot { exponent });
                        }
                    } else {
                        let v = rhs / pivot;
                        if u < top && v.is_negative() {
                            return Err(Reject::NegativeMultiplier {
                                exponent: self.layout.exponent(u),
                            });
                        }
                        values[u] = Some(v);
                    }
                }
            }
        }
        Ok(())
    }

    /// Sweeps from `values` and assembles the verified outcome.
    pub fn solve(&self, mut values: Vec<Option<Rational>>) -> Result<SolveOutcome, SolveError> {
        self.sweep(&mut values).map_err(SolveError::Rejected)?;
        self.finish(values)
    }

    /// Assembles and verifies the outcome of a completed sweep.
    pub fn finish(&self, values: Vec<Option<Rational>>) -> Result<SolveOutcome, SolveError> {
        let values: Vec<Rational> = values.into_iter().map(Option::unwrap_or_default).collect();
        let outcome = self.assemble(&values);
        if !outcome.certificate.verify(self.p) {
            return Err(SolveError::VerificationFailed);
        }
        Ok(outcome)
    }

    fn assemble(&self, values: &[Rational]) -> SolveOutcome {
        let layout = &self.layout;
        let l = layout.top_row();
        let mut multipliers: Vec<Rational> = values[..l].to_vec();
        multipliers.push(Rational::one());
        let lower: Vec<Vec<Rational>> = (0..=l)
            .map(|row| {
                (0..row)
                    .map(|col| {
                        let id = layout
                            .slot_id(super::Slot::Lower { row, col })
                            .expect("slot");
                        values[id].clone()
                    })
                    .collect()
            })
            .collect();
        let scheme = TriangularScheme {
            support: layout.support().clone(),
            multipliers,
            lower,
            scale: self.lc.clone(),
        };
        let mut terms = Vec::new();
        let mut constant = Rational::zero();
        for row in (0..=l).rev() {
            let d = &scheme.multipliers[row];
            if d.is_zero() {
                continue;
            }
            let q = scheme.square(row);
            if q.is_constant() {
                constant = d.clone();
            } else {
                terms.push(SquareTerm::new(d.clone(), q));
            }
        }
        let certificate = UniCertificate::new(self.lc.clone(), terms, constant)
            .with_support(layout.support().powers().to_vec());
        SolveOutcome {
            constant_square: scheme.multipliers[0].clone(),
            scheme,
            certificate,
        }
    }
}

/// Solves the triangular system with the unknowns in `pins` fixed. Every
/// other unknown must be determined by its equation; unknowns that never
/// need a value are set to 0.
pub fn border_solve(
    p: &UniPoly,
    support: &SupportSet,
    pins: &Assignment,
) -> Result<SolveOutcome, SolveError> {
    let problem = Problem::new(p, support)?;
    let values = problem.pin_values(pins)?;
    problem.solve(values)
}

/// The lowest multiplier `border_solve` would produce at this point.
pub fn delta(p: &UniPoly, support: &SupportSet, pins: &Assignment) -> Result<Rational, SolveError> {
    border_solve(p, support, pins).map(|o| o.constant_square)
}
