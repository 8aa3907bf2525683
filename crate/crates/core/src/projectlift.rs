//! Multivariate certificates through a univariate projection.
//!
//! `xᵢ ↦ t^{kᵢ}` maps the input to `G(t)`; the exponents are chosen so the
//! map is injective on the input's support and invertible by digit
//! decomposition on the squares' supports. A sparse support for the squares
//! is selected from the input's exponent vectors, `G` is certified over it,
//! and every square is mapped back. The lifted identity is re-verified.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::certificate::{SosCertificate, SquareTerm};
use crate::ddp::{
    self, Assignment, InfeasibilityWitness, SearchConfig, SearchOutcome, SolveError, Strategy,
    SupportSet,
};
use crate::ratpoly::{substitute_powers, Monomial, PolyRing};
use crate::{MultiCertificate, MultiPoly, Rational, UniCertificate, UniPoly};

/// First monomial where a lifted identity disagrees with the input.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub monomial: String,
    pub expected: Rational,
    pub got: Rational,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiftError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("power sequence overflows 64 bits")]
    Overflow,
    #[error("power substitution is not injective on the support ({0} and {1} collide)")]
    NotInjective(String, String),
    #[error("support selection stuck at {0}")]
    SelectionStuck(String),
    #[error("selected support tops out at {top} but the projection has degree {degree}")]
    SupportTop { top: u64, degree: usize },
    #[error("lifted identity fails at {}: expected {}, got {}", .0.monomial, .0.expected, .0.got)]
    LiftMismatch(Box<Mismatch>),
    #[error("certificate has a nonpositive scale or multiplier, or a negative constant")]
    InvalidSigns,
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Substitution exponents `k₁ = 1 < k₂ < … < kₙ`, one per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerMap(Vec<u64>);

impl PowerMap {
    pub fn new(powers: Vec<u64>) -> Self {
        Self(powers)
    }

    pub fn powers(&self) -> &[u64] {
        &self.0
    }

    /// `Σ kᵢ·dᵢ`.
    pub fn image(&self, m: &Monomial) -> u64 {
        m.0.iter()
            .zip(&self.0)
            .map(|(&d, &k)| u64::from(d) * k)
            .sum()
    }

    /// Digit decomposition of `e`, from the largest power down.
    pub fn preimage(&self, mut e: u64) -> Monomial {
        let mut exps = vec![0u32; self.0.len()];
        for (i, &k) in self.0.iter().enumerate().rev() {
            exps[i] = (e / k) as u32;
            e %= k;
        }
        Monomial(exps)
    }
}

impl fmt::Display for PowerMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `k₁ = 1`, `k_{i+1} = 1 + max over monomials of Σ_{j≤i} kⱼdⱼ` (at least
/// `kᵢ + 1`). Each power exceeds every partial image, so the map is
/// injective on the support; this is checked.
pub fn power_sequence(p: &MultiPoly) -> Result<PowerMap, LiftError> {
    if p.is_zero() {
        return Err(LiftError::ZeroPolynomial);
    }
    let n = p.nvars();
    let mut ks: Vec<u64> = Vec::with_capacity(n);
    for i in 0..n {
        if i == 0 {
            ks.push(1);
            continue;
        }
        let mut max = 0u64;
        for (m, _) in p.terms() {
            let mut sum = 0u64;
            for (&d, &k) in m.0[..i].iter().zip(&ks) {
                let part = u64::from(d).checked_mul(k).ok_or(LiftError::Overflow)?;
                sum = sum.checked_add(part).ok_or(LiftError::Overflow)?;
            }
            max = max.max(sum);
        }
        let next = max.checked_add(1).ok_or(LiftError::Overflow)?;
        ks.push(next.max(ks[i - 1] + 1));
    }
    let map = PowerMap(ks);
    let mut seen = std::collections::HashMap::new();
    for (m, _) in p.terms() {
        let img = checked_image(&map, m)?;
        if let Some(prev) = seen.insert(img, m.clone()) {
            return Err(LiftError::NotInjective(
                monomial_text(p.vars(), &prev),
                monomial_text(p.vars(), m),
            ));
        }
    }
    Ok(map)
}

fn checked_image(map: &PowerMap, m: &Monomial) -> Result<u64, LiftError> {
    m.0.iter().zip(&map.0).try_fold(0u64, |acc, (&d, &k)| {
        u64::from(d)
            .checked_mul(k)
            .and_then(|v| acc.checked_add(v))
            .ok_or(LiftError::Overflow)
    })
}

fn monomial_text(vars: &[String], m: &Monomial) -> String {
    let parts: Vec<String> = vars
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
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Candidate half support `𝒩`; `leftovers` is empty on success.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSupport {
    pub vectors: BTreeSet<Monomial>,
    pub leftovers: BTreeSet<Monomial>,
}

/// Selects the exponents the squares are built over.
///
/// `𝒩` starts as the halves of the all-even exponent vectors and `ℳ` holds
/// the others. Each `m ∈ ℳ`, in graded-lex order, adds `m − v` for every
/// `v ∈ 𝒩` with `v ≤ m` componentwise and `|v| < |m|`. The result is the
/// sorted set of images of `𝒩`.
pub fn power_selection(
    p: &MultiPoly,
    k: &PowerMap,
) -> Result<(SupportSet, HalfSupport), LiftError> {
    let mut half: BTreeSet<Monomial> = BTreeSet::new();
    let mut rest: BTreeSet<Monomial> = BTreeSet::new();
    for (m, _) in p.terms() {
        if m.all_even() {
            half.insert(Monomial(m.0.iter().map(|e| e / 2).collect()));
        } else {
            rest.insert(m.clone());
        }
    }
    for m in rest {
        let below: Vec<Monomial> = half
            .iter()
            .filter(|v| v.divides(&m) && v.total_degree() < m.total_degree())
            .cloned()
            .collect();
        if below.is_empty() {
            return Err(LiftError::SelectionStuck(monomial_text(p.vars(), &m)));
        }
        for v in below {
            half.insert(Monomial(m.0.iter().zip(&v.0).map(|(a, b)| a - b).collect()));
        }
    }
    let mut powers: Vec<u64> = half
        .iter()
        .map(|v| checked_image(k, v))
        .collect::<Result<_, _>>()?;
    powers.sort_unstable();
    powers.dedup();
    let support = SupportSet::new(powers)?;
    Ok((
        support,
        HalfSupport {
            vectors: half,
            leftovers: BTreeSet::new(),
        },
    ))
}

/// Maps every `t^e` back to the monomial given by digit decomposition.
pub fn inverse_kronecker(g: &UniPoly, k: &PowerMap, vars: &[String]) -> MultiPoly {
    MultiPoly::from_terms(
        vars.to_vec(),
        g.terms().map(|(e, c)| (k.preimage(e as u64), c.clone())),
    )
}

/// Lifts every square of `cert` and checks the result against `p`.
pub fn lift_certificate(
    cert: &UniCertificate,
    k: &PowerMap,
    p: &MultiPoly,
) -> Result<MultiCertificate, LiftError> {
    let vars = p.vars();
    let terms = cert
        .terms
        .iter()
        .map(|t| SquareTerm::new(t.multiplier.clone(), inverse_kronecker(&t.poly, k, vars)))
        .collect();
    let lifted = SosCertificate::new(cert.scale.clone(), terms, cert.constant.clone())
        .with_support(cert.support.clone())
        .with_strategy(cert.strategy.clone());
    if lifted.verify(p) {
        return Ok(lifted);
    }
    let expanded = lifted.expand(&p.zero_like());
    let diff = &expanded - p;
    let Some((m, _)) = diff.terms().next_back() else {
        return Err(LiftError::InvalidSigns);
    };
    Err(LiftError::LiftMismatch(Box::new(Mismatch {
        monomial: monomial_text(vars, m),
        expected: p.coeff(m),
        got: expanded.coeff(m),
    })))
}

/// Intermediate stages, for tracing.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionTrace {
    pub powers: PowerMap,
    pub projected: UniPoly,
    pub support: SupportSet,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MultiOutcome {
    Certified(Box<MultiCertificate>),
    Infeasible(InfeasibilityWitness),
    Exhausted(ddp::Exhausted),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiResult {
    pub trace: ProjectionTrace,
    pub outcome: MultiOutcome,
    /// Support exponents whose squares the zero-row retry dropped.
    pub zero_rows: Vec<u64>,
}

/// Projects, selects a support, searches it, and lifts back.
pub fn certify_multivariate(
    p: &MultiPoly,
    config: &SearchConfig,
) -> Result<MultiResult, LiftError> {
    let powers = power_sequence(p)?;
    let projected = substitute_powers(p, powers.powers());
    let (support, _) = power_selection(p, &powers)?;
    let degree = projected.degree().unwrap_or(0);
    if degree % 2 == 1 || support.top() * 2 != degree as u64 {
        return Err(LiftError::SupportTop {
            top: support.top(),
            degree,
        });
    }
    let trace = ProjectionTrace {
        powers: powers.clone(),
        projected: projected.clone(),
        support: support.clone(),
    };
    let mut result = ddp::search(&projected, &support, config)?;
    let mut zero_rows = Vec::new();
    if matches!(result, SearchOutcome::Exhausted(_))
        && config.pins.is_empty()
        && config.fallback_points > 0
    {
        if let Some((rows, found)) = zero_row_fallback(&projected, &support, config)? {
            zero_rows = rows;
            result = found;
        }
    }
    let outcome = match result {
        SearchOutcome::Found(found) => {
            let lifted = lift_certificate(&found.outcome.certificate, &powers, p)?;
            MultiOutcome::Certified(Box::new(lifted))
        }
        SearchOutcome::Infeasible(w) => MultiOutcome::Infeasible(w),
        SearchOutcome::Exhausted(e) => MultiOutcome::Exhausted(e),
    };
    Ok(MultiResult {
        trace,
        outcome,
        zero_rows,
    })
}

/// Retries sparse searches with the squares led by the lowest `k` support
/// exponents dropped. Core values are first restricted to `{0, 1, -1}`, then
/// the configured grid; each pass raises the core weight step by step and,
/// per weight, tries the largest `k` first. All searches share
/// `fallback_points`. Returns the dropped exponents and the first
/// certificate found.
fn zero_row_fallback(
    g: &UniPoly,
    support: &SupportSet,
    config: &SearchConfig,
) -> Result<Option<(Vec<u64>, SearchOutcome)>, LiftError> {
    let below_top = &support.powers()[..support.len() - 1];
    let unit = vec![Rational::zero(), Rational::one(), -Rational::one()];
    let mut budget = config.fallback_points;
    for core_grid in [unit, config.core_grid.clone()] {
        let cores = below_top.len() * (below_top.len() + 1) / 2;
        for weight in 0..=cores as u64 {
            for k in (0..=below_top.len()).rev() {
                if budget == 0 {
                    return Ok(None);
                }
                let rows = below_top[..k].to_vec();
                let pins = rows.iter().fold(Assignment::new(), |a, &e| {
                    a.with_diagonal(e, Rational::zero())
                });
                let step = SearchConfig {
                    strategy: Strategy::Sparse,
                    core_grid: core_grid.clone(),
                    core_weight: Some(weight),
                    max_points: budget,
                    pins,
                    ..config.clone()
                };
                match ddp::search(g, support, &step)? {
                    SearchOutcome::Exhausted(e) => budget -= e.points_tested.min(budget),
                    found => return Ok(Some((rows, found))),
                }
            }
        }
    }
    Ok(None)
}

/// True when every monomial satisfies `Σ_{j<i} kⱼdⱼ < kᵢ`, the condition
/// under which [`inverse_kronecker`] inverts [`substitute_powers`].
pub fn within_digit_bounds(p: &MultiPoly, k: &PowerMap) -> bool {
    p.terms().all(|(m, _)| {
        (1..k.powers().len()).all(|i| {
            let partial: u64 = m.0[..i]
                .iter()
                .zip(k.powers())
                .map(|(&d, &kk)| u64::from(d) * kk)
                .sum();
            partial < k.powers()[i]
        })
    })
}
