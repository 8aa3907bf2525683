//! End-to-end certification of univariate polynomials.
//!
//! Nonnegativity is decided first. The square part `s` of `p = s²·p₁` is
//! split off, `p₁` is searched over the dense support, and the result is
//! multiplied back by `s`. When the search fails and `p = g²·q + m` with
//! a minimum shift `m`, the smaller `q` is tried instead.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::ddp::{
    self, Exhausted, InfeasibilityWitness, SearchConfig, SearchOutcome, SolveError, Strategy,
    SupportSet,
};
use crate::positivity::{self, Classification, PositivityError};
use crate::{Rational, UniCertificate, UniPoly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Positivity(#[from] PositivityError),
    #[error("internal error: composed certificate does not verify")]
    VerificationFailed,
}

#[derive(Clone, Debug, PartialEq)]
pub enum UniOutcome {
    Certified(Box<UniCertificate>),
    NotNonnegative { witness: Rational },
    Infeasible(InfeasibilityWitness),
    Exhausted(Exhausted),
}

/// Certifies `p ≥ 0` or explains why not.
pub fn certify_univariate(p: &UniPoly, config: &SearchConfig) -> Result<UniOutcome, PipelineError> {
    if p.is_constant() {
        let c = p.coeff(0);
        return Ok(if c.is_negative() {
            UniOutcome::NotNonnegative {
                witness: Rational::zero(),
            }
        } else {
            UniOutcome::Certified(Box::new(UniCertificate::constant_only(c)))
        });
    }
    let report = positivity::classify(p)?;
    if report.classification == Classification::NotNonnegative {
        return Ok(UniOutcome::NotNonnegative {
            witness: report
                .witness
                .expect("negative polynomials carry a witness"),
        });
    }
    let first = match certify_definite(p, config)? {
        UniOutcome::Certified(c) => return Ok(UniOutcome::Certified(c)),
        other => other,
    };
    if let Some(split) = positivity::min_shift_split(p) {
        if !split.m.is_negative() && !split.q.is_constant() {
            let report = positivity::classify(&split.q)?;
            if report.classification != Classification::NotNonnegative {
                if let UniOutcome::Certified(inner) = certify_definite(&split.q, config)? {
                    let cert = inner.compose_with_square(&split.g).add_constant(&split.m);
                    if !cert.verify(p) {
                        return Err(PipelineError::VerificationFailed);
                    }
                    return Ok(UniOutcome::Certified(Box::new(cert)));
                }
            }
        }
    }
    Ok(first)
}

/// Square-factor split, dense search on the definite part, composition.
/// An unpinned search that exhausts is retried once with the sparse
/// strategy under `fallback_points`.
fn certify_definite(p: &UniPoly, config: &SearchConfig) -> Result<UniOutcome, PipelineError> {
    let split = positivity::square_factor_split(p)?;
    let p1 = &split.definite_part;
    let support = SupportSet::dense(p1.degree().unwrap_or(0) as u64 / 2);
    let mut outcome = ddp::search(p1, &support, config)?;
    let retry =
        config.pins.is_empty() && config.fallback_points > 0 && config.strategy != Strategy::Sparse;
    if retry && matches!(outcome, SearchOutcome::Exhausted(_)) {
        let sparse = SearchConfig {
            strategy: Strategy::Sparse,
            max_points: config.fallback_points,
            ..config.clone()
        };
        if let found @ SearchOutcome::Found(_) = ddp::search(p1, &support, &sparse)? {
            outcome = found;
        }
    }
    Ok(match outcome {
        SearchOutcome::Found(found) => {
            let inner = found.outcome.certificate;
            let cert = if split.square_part.is_constant() {
                inner
            } else {
                inner.compose_with_square(&split.square_part)
            };
            if !cert.verify(p) {
                return Err(PipelineError::VerificationFailed);
            }
            UniOutcome::Certified(Box::new(cert))
        }
        SearchOutcome::Infeasible(w) => UniOutcome::Infeasible(w),
        SearchOutcome::Exhausted(e) => UniOutcome::Exhausted(e),
    })
}
