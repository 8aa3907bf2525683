//! Degree-descending triangular solver and the grid searches built on it.
//!
//! For a fixed choice of the diagonal multipliers and core entries, the
//! coefficient equations of `p = lc·Σ dⱼ·qⱼ²` are processed from the top
//! exponent down. Each one either introduces exactly one new unknown,
//! linearly, and is solved for it, or introduces none and is checked.
//! [`search`] walks grids (or seeded random draws) of the free values until
//! a point solves with every multiplier nonnegative.

mod layout;
mod rng;
mod search;
mod solve;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::Rational;

pub use layout::{Layout, Plan, PlanError, Role, Slot, SlotClass};
pub use rng::Mcg;
pub use search::{
    collect_solutions, diagonal_contradiction, search, Exhausted, Found, InfeasibilityKind,
    InfeasibilityWitness, SearchConfig, SearchOutcome, Strategy,
};
pub use solve::{border_solve, delta, SolveOutcome, TriangularScheme};

/// Strictly increasing exponents `s₀ < … < s_l`; the squares are built over
/// the monomials `t^{sᵢ}` and `s_l` is half the target degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportSet(Vec<u64>);

impl SupportSet {
    pub fn new(powers: Vec<u64>) -> Result<Self, SolveError> {
        if powers.is_empty() {
            return Err(SolveError::BadSupport("empty support".into()));
        }
        if powers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SolveError::BadSupport(
                "exponents must be strictly increasing".into(),
            ));
        }
        Ok(Self(powers))
    }

    /// `{0, 1, …, d}`.
    pub fn dense(d: u64) -> Self {
        Self((0..=d).collect())
    }

    pub fn powers(&self) -> &[u64] {
        &self.0
    }

    pub fn top(&self) -> u64 {
        *self.0.last().expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Fixed values for scheme unknowns, keyed by support exponents.
///
/// `diagonal[s]` is the multiplier of the square led by `t^s`;
/// `lower[(r, c)]` is the coefficient of `t^c` in the square led by `t^r`.
/// Any unknown may be pinned, border entries included.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assignment {
    pub diagonal: BTreeMap<u64, Rational>,
    pub lower: BTreeMap<(u64, u64), Rational>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_diagonal(mut self, row: u64, value: Rational) -> Self {
        self.diagonal.insert(row, value);
        self
    }

    pub fn with_lower(mut self, row: u64, col: u64, value: Rational) -> Self {
        self.lower.insert((row, col), value);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty() && self.lower.is_empty()
    }

    /// Converts entries of a lower-triangular factor `A` with `p = X·A·Aᵀ·Xᵀ`
    /// into multiplier form: `d = a_jj²`, `L[i][j] = a_ij / a_ii`. A row
    /// without a diagonal entry is taken to have `a_ii = 1`.
    pub fn from_factor_entries(
        diagonal: &[(u64, Rational)],
        lower: &[((u64, u64), Rational)],
    ) -> Self {
        let mut out = Self::new();
        for (row, a) in diagonal {
            out.diagonal.insert(*row, a * a);
        }
        for ((row, col), a) in lower {
            let lead = diagonal
                .iter()
                .find(|(r, _)| r == row)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| crate::scalar::int(1));
            out.lower.insert((*row, *col), a / lead);
        }
        out
    }

    /// Pins every entry off the main and first sub-diagonal to 0.
    pub fn banded(support: &SupportSet) -> Self {
        let s = support.powers();
        let mut out = Self::new();
        for row in 2..s.len() {
            for col in 0..row - 1 {
                out.lower.insert((s[row], s[col]), crate::scalar::int(0));
            }
        }
        out
    }

    /// `other` wins on conflicts.
    pub fn merged(&self, other: &Assignment) -> Assignment {
        let mut out = self.clone();
        out.diagonal
            .extend(other.diagonal.iter().map(|(k, v)| (*k, v.clone())));
        out.lower
            .extend(other.lower.iter().map(|(k, v)| (*k, v.clone())));
        out
    }
}

/// Why a point was rejected; `exponent` is the coefficient equation (or,
/// for negative multipliers, the support exponent of the square).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reject {
    /// A fully determined equation does not hold.
    Mismatch { exponent: u64 },
    /// The single unknown has pivot 0 but the equation still needs it.
    ZeroPivot { exponent: u64 },
    /// The single unknown enters squared.
    Nonlinear { exponent: u64 },
    /// Two or more unknowns enter the same equation.
    UnderDetermined { exponent: u64 },
    /// A solved multiplier is negative.
    NegativeMultiplier { exponent: u64 },
}

impl Reject {
    pub fn exponent(&self) -> u64 {
        match *self {
            Reject::Mismatch { exponent }
            | Reject::ZeroPivot { exponent }
            | Reject::Nonlinear { exponent }
            | Reject::UnderDetermined { exponent }
            | Reject::NegativeMultiplier { exponent } => exponent,
        }
    }
}

impl fmt::Display for Reject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reject::Mismatch { exponent } => write!(f, "equation violated at e={exponent}"),
            Reject::ZeroPivot { exponent } => write!(f, "zero pivot at e={exponent}"),
            Reject::Nonlinear { exponent } => write!(f, "nonlinear at e={exponent}"),
            Reject::UnderDetermined { exponent } => write!(f, "under-determined at e={exponent}"),
            Reject::NegativeMultiplier { exponent } => {
                write!(f, "negative multiplier for the square led by t^{exponent}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("degree {0} is odd")]
    OddDegree(usize),
    #[error("leading coefficient must be positive")]
    NonpositiveLeading,
    #[error("support top {top} must be half the degree ({half})")]
    SupportMismatch { top: u64, half: u64 },
    #[error("invalid support: {0}")]
    BadSupport(String),
    #[error("invalid pin: {0}")]
    BadPin(String),
    #[error("invalid search configuration: {0}")]
    BadConfig(String),
    #[error("point rejected: {0}")]
    Rejected(Reject),
    #[error("internal error: solved certificate does not verify")]
    VerificationFailed,
}
