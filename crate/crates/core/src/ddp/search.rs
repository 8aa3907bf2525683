use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::layout::{Role, SlotClass};
use super::rng::Mcg;
use super::solve::{Problem, SolveOutcome};
use super::{Assignment, SolveError, SupportSet};
use crate::scalar::{int, rat};
use crate::{Rational, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Diagonal grid only, free core entries fixed to 0.
    CoreZero,
    /// Full Cartesian product of the diagonal and core grids.
    FullGrid,
    /// Seeded independent draws from the grids.
    MonteCarlo,
    /// Every entry off the first sub-diagonal pinned to 0.
    Banded,
    /// Full grid ordered by the number of nonzero core entries.
    Sparse,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::CoreZero => "core_zero",
            Strategy::FullGrid => "full_grid",
            Strategy::MonteCarlo => "monte_carlo",
            Strategy::Banded => "banded",
            Strategy::Sparse => "sparse",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "core_zero" => Ok(Strategy::CoreZero),
            "full_grid" => Ok(Strategy::FullGrid),
            "monte_carlo" => Ok(Strategy::MonteCarlo),
            "banded" => Ok(Strategy::Banded),
            "sparse" => Ok(Strategy::Sparse),
            other => Err(format!(
                "unknown strategy '{other}' (expected core_zero, full_grid, monte_carlo, banded or sparse)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub strategy: Strategy,
    /// Values tried for grid-driven multipliers; all positive.
    pub diagonal_grid: Vec<Rational>,
    /// Values tried for grid-driven core entries.
    pub core_grid: Vec<Rational>,
    pub max_points: u64,
    pub seed: u64,
    /// Return the first accepted point in enumeration order.
    pub deterministic: bool,
    /// Values fixed for every point.
    pub pins: Assignment,
    /// Sparse only: visit just the points with this many nonzero core
    /// entries.
    pub core_weight: Option<u64>,
    /// Points allowed to each zero-row retry of the multivariate pipeline;
    /// 0 disables the retries.
    pub fallback_points: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::CoreZero,
            diagonal_grid: vec![rat(1, 4), rat(1, 2), int(1), rat(9, 4), int(4)],
            core_grid: vec![
                int(0),
                rat(1, 2),
                rat(-1, 2),
                int(1),
                int(-1),
                rat(3, 2),
                rat(-3, 2),
                int(2),
                int(-2),
            ],
            max_points: 1_000_000,
            seed: 0,
            deterministic: true,
            pins: Assignment::new(),
            core_weight: None,
            fallback_points: 5_000_000,
        }
    }
}

impl SearchConfig {
    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    fn validate(&self) -> Result<(), SolveError> {
        if self.diagonal_grid.is_empty() || self.core_grid.is_empty() {
            return Err(SolveError::BadConfig("grids must be nonempty".into()));
        }
        if self.diagonal_grid.iter().any(|d| !d.is_positive()) {
            return Err(SolveError::BadConfig(
                "diagonal grid values must be positive".into(),
            ));
        }
        if self.max_points == 0 {
            return Err(SolveError::BadConfig("max_points must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfeasibilityKind {
    /// Only squares reach the exponent and its coefficient is negative.
    NegativeSquareSum,
    /// No pair of support exponents reaches it, yet its coefficient is nonzero.
    UnreachableExponent,
}

/// A coefficient equation no choice of unknowns can satisfy.
#[derive(Clone, Debug, PartialEq)]
pub struct InfeasibilityWitness {
    pub exponent: u64,
    /// The coefficient the equation forces, relative to the leading one.
    pub forced_value: Rational,
    pub kind: InfeasibilityKind,
    pub explanation: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exhausted {
    pub points_tested: u64,
    /// Set when the support admits no plan at all.
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Found {
    pub outcome: SolveOutcome,
    /// Position in enumeration (or draw) order.
    pub point_index: u64,
    /// Grid-driven values in plan order.
    pub point: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found(Box<Found>),
    Infeasible(InfeasibilityWitness),
    Exhausted(Exhausted),
}

/// Finds an exponent whose equation is infeasible for every choice of
/// unknowns, scanning from the top down.
pub fn diagonal_contradiction(p: &UniPoly, support: &SupportSet) -> Option<InfeasibilityWitness> {
    let lc = p.leading_coeff()?.clone();
    let s = support.powers();
    let top = 2 * support.top() as usize;
    for e in (0..=top.max(p.degree().unwrap_or(0))).rev() {
        let c = p.coeff(e);
        if c.is_zero() {
            continue;
        }
        let mut reps = 0;
        let mut off_diagonal = false;
        for (k, &a) in s.iter().enumerate() {
            for &b in &s[k..] {
                if (a + b) as usize == e {
                    reps += 1;
                    off_diagonal |= a != b;
                }
            }
        }
        let forced_value = c / lc.clone();
        let exponent = e as u64;
        if reps == 0 {
            return Some(InfeasibilityWitness {
                exponent,
                explanation: format!("no product of support monomials reaches t^{e}, but its coefficient is {forced_value}"),
                forced_value,
                kind: InfeasibilityKind::UnreachableExponent,
            });
        }
        if !off_diagonal && forced_value.is_negative() {
            let half = e / 2;
            return Some(InfeasibilityWitness {
                exponent,
                explanation: format!(
                    "the coefficient of t^{e} is a nonnegative combination of squares of the entries in column t^{half}, but must equal {forced_value}"
                ),
                forced_value,
                kind: InfeasibilityKind::NegativeSquareSum,
            });
        }
    }
    None
}

/// Per-search state shared by every point.
struct Prepared<'a> {
    problem: Problem<'a>,
    base: Vec<Option<Rational>>,
    /// Grid-driven slots and the values each one ranges over.
    axes: Vec<(usize, Vec<Rational>)>,
    /// Marks the core axes; their value 0 comes first.
    core: Vec<bool>,
}

enum Preparation<'a> {
    Ready(Prepared<'a>),
    Infeasible(InfeasibilityWitness),
    NoPlan(String),
}

fn prepare<'a>(
    p: &'a UniPoly,
    support: &SupportSet,
    config: &SearchConfig,
) -> Result<Preparation<'a>, SolveError> {
    config.validate()?;
    let problem = Problem::new(p, support)?;
    if let Some(w) = diagonal_contradiction(p, support) {
        return Ok(Preparation::Infeasible(w));
    }
    let pins = match config.strategy {
        Strategy::Banded => Assignment::banded(support).merged(&config.pins),
        _ => config.pins.clone(),
    };
    let mut base = problem.pin_values(&pins)?;
    let pinned_zero: Vec<Option<bool>> =
        base.iter().map(|v| v.as_ref().map(Zero::is_zero)).collect();
    let plan = match problem.layout.plan(&pinned_zero) {
        Ok(plan) => plan,
        Err(e) => return Ok(Preparation::NoPlan(e.to_string())),
    };
    let mut axes = Vec::new();
    let mut core = Vec::new();
    for &id in &plan.grid {
        match problem.layout.class(id) {
            SlotClass::Diagonal | SlotClass::Border => {
                axes.push((id, config.diagonal_grid.clone()));
                core.push(false);
            }
            SlotClass::Core => match config.strategy {
                Strategy::CoreZero | Strategy::Banded => base[id] = Some(Rational::zero()),
                Strategy::FullGrid | Strategy::MonteCarlo => {
                    axes.push((id, config.core_grid.clone()));
                    core.push(true);
                }
                Strategy::Sparse => {
                    let nonzero = config.core_grid.iter().filter(|v| !v.is_zero()).cloned();
                    axes.push((
                        id,
                        std::iter::once(Rational::zero()).chain(nonzero).collect(),
                    ));
                    core.push(true);
                }
            },
        }
    }
    for (id, role) in plan.roles.iter().enumerate() {
        if *role == Role::Idle && base[id].is_none() {
            base[id] = Some(Rational::zero());
        }
    }
    Ok(Preparation::Ready(Prepared {
        problem,
        base,
        axes,
        core,
    }))
}

impl Prepared<'_> {
    /// Number of grid points, saturating.
    fn grid_size(&self) -> u64 {
        self.axes
            .iter()
            .fold(1u64, |acc, (_, vals)| acc.saturating_mul(vals.len() as u64))
    }

    /// Mixed-radix decoding, first axis most significant.
    fn grid_point(&self, mut index: u64) -> Vec<usize> {
        let mut out = vec![0; self.axes.len()];
        for (slot, (_, vals)) in out.iter_mut().zip(&self.axes).rev() {
            let n = vals.len() as u64;
            *slot = (index % n) as usize;
            index /= n;
        }
        out
    }

    fn evaluate(&self, picks: &[usize], index: u64, strategy: Strategy) -> Option<Found> {
        let mut values = self.base.clone();
        let mut point = Vec::with_capacity(picks.len());
        for (&pick, (id, vals)) in picks.iter().zip(&self.axes) {
            values[*id] = Some(vals[pick].clone());
            point.push(vals[pick].clone());
        }
        match self.problem.solve(values) {
            Ok(mut outcome) => {
                outcome.certificate.strategy = strategy.name().to_string();
                Some(Found {
                    outcome,
                    point_index: index,
                    point,
                })
            }
            Err(SolveError::Rejected(_)) => None,
            Err(e) => panic!("search produced an invalid certificate: {e}"),
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

const CHUNK: u64 = 4096;

/// Searches the configured grid for a point whose triangular solve yields
/// nonnegative multipliers. The returned certificate has been verified.
pub fn search(
    p: &UniPoly,
    support: &SupportSet,
    config: &SearchConfig,
) -> Result<SearchOutcome, SolveError> {
    let prepared = match prepare(p, support, config)? {
        Preparation::Ready(pr) => pr,
        Preparation::Infeasible(w) => return Ok(SearchOutcome::Infeasible(w)),
        Preparation::NoPlan(reason) => {
            return Ok(SearchOutcome::Exhausted(Exhausted {
                points_tested: 0,
                reason: Some(reason),
            }))
        }
    };
    let strategy = config.strategy;
    let found = if strategy == Strategy::MonteCarlo {
        monte_carlo(&prepared, config)
    } else if strategy == Strategy::Sparse {
        let mut hit = None;
        let tested = sparse(&prepared, config, &mut |f| {
            hit = Some(f);
            false
        });
        hit.ok_or(tested)
    } else {
        let total = prepared.grid_size().min(config.max_points);
        let mut start = 0;
        let mut hit = None;
        while start < total && hit.is_none() {
            let end = (start + CHUNK).min(total);
            let eval = |i: u64| prepared.evaluate(&prepared.grid_point(i), i, strategy);
            hit = if config.deterministic {
                (start..end).into_par_iter().find_map_first(eval)
            } else {
                (start..end).into_par_iter().find_map_any(eval)
            };
            start = end;
        }
        hit.ok_or(total)
    };
    Ok(match found {
        Ok(f) => SearchOutcome::Found(Box::new(f)),
        Err(tested) => SearchOutcome::Exhausted(Exhausted {
            points_tested: tested,
            reason: None,
        }),
    })
}

/// Depth-first walk of the grid in blocks of increasing core weight (the
/// number of nonzero core entries). Axes are assigned in order of their
/// highest equation; equations above the next axis are swept as soon as they
/// are determined, so a violated equation discards every completion at once.
/// Calls `accept` on each verified point until it returns false; returns
/// the number of points tested, pruned completions included.
fn sparse(
    prepared: &Prepared<'_>,
    config: &SearchConfig,
    accept: &mut dyn FnMut(Found) -> bool,
) -> u64 {
    let layout = &prepared.problem.layout;
    let top = layout.equations.len();
    let mut order: Vec<usize> = (0..prepared.axes.len()).collect();
    order.sort_by_key(|&a| {
        std::cmp::Reverse(layout.first_equation(prepared.axes[a].0).unwrap_or(0))
    });
    let walk = Walk {
        prepared,
        bounds: order
            .iter()
            .map(|&a| {
                layout
                    .first_equation(prepared.axes[a].0)
                    .map_or(0, |e| e + 1)
            })
            .collect(),
        cores_after: (0..=order.len())
            .map(|i| order[i..].iter().filter(|&&a| prepared.core[a]).count() as u64)
            .collect(),
        diag_after: (0..=order.len())
            .map(|i| {
                order[i..]
                    .iter()
                    .filter(|&&a| !prepared.core[a])
                    .fold(1u64, |acc, &a| {
                        acc.saturating_mul(prepared.axes[a].1.len() as u64)
                    })
            })
            .collect(),
        nonzero: order
            .iter()
            .find(|&&a| prepared.core[a])
            .map_or(0, |&a| prepared.axes[a].1.len() as u64 - 1),
        order,
        max_points: config.max_points,
    };
    let mut state = WalkState {
        tested: 0,
        picks: vec![0; prepared.axes.len()],
        accept,
        stopped: false,
    };
    let weights = match config.core_weight {
        Some(w) => w..=w,
        None => 0..=walk.cores_after[0],
    };
    for weight in weights {
        walk.visit(0, prepared.base.clone(), top, weight, &mut state);
        if state.stopped || state.tested >= walk.max_points {
            break;
        }
    }
    state.tested.min(walk.max_points)
}

struct Walk<'p, 'a> {
    prepared: &'p Prepared<'a>,
    order: Vec<usize>,
    /// Equations at or above `bounds[i]` are determined once the first `i`
    /// axes of `order` are assigned.
    bounds: Vec<usize>,
    cores_after: Vec<u64>,
    diag_after: Vec<u64>,
    nonzero: u64,
    max_points: u64,
}

struct WalkState<'f> {
    tested: u64,
    picks: Vec<usize>,
    accept: &'f mut dyn FnMut(Found) -> bool,
    stopped: bool,
}

impl Walk<'_, '_> {
    /// Completions of the first `level` axes with exactly `weight` more
    /// nonzero core entries.
    fn completions(&self, level: usize, weight: u64) -> u64 {
        binomial(self.cores_after[level], weight)
            .saturating_mul(self.nonzero.saturating_pow(weight as u32))
            .saturating_mul(self.diag_after[level])
    }

    fn visit(
        &self,
        level: usize,
        mut values: Vec<Option<Rational>>,
        swept: usize,
        weight: u64,
        state: &mut WalkState<'_>,
    ) {
        if state.stopped || state.tested >= self.max_points || self.cores_after[level] < weight {
            return;
        }
        let bound = self.bounds.get(level).copied().unwrap_or(0).min(swept);
        if self
            .prepared
            .problem
            .sweep_range(&mut values, bound..swept)
            .is_err()
        {
            state.tested = state.tested.saturating_add(self.completions(level, weight));
            return;
        }
        if level == self.order.len() {
            if weight == 0 {
                let index = state.tested;
                state.tested += 1;
                let point = (0..state.picks.len())
                    .map(|a| self.prepared.axes[a].1[state.picks[a]].clone())
                    .collect();
                match self.prepared.problem.finish(values) {
                    Ok(mut outcome) => {
                        outcome.certificate.strategy = Strategy::Sparse.name().to_string();
                        let found = Found {
                            outcome,
                            point_index: index,
                            point,
                        };
                        state.stopped = !(state.accept)(found);
                    }
                    Err(e) => panic!("search produced an invalid certificate: {e}"),
                }
            }
            return;
        }
        let axis = self.order[level];
        let (id, vals) = &self.prepared.axes[axis];
        let core = self.prepared.core[axis];
        for (pick, v) in vals.iter().enumerate() {
            let used = u64::from(core && pick > 0);
            if used > weight {
                continue;
            }
            let mut next = values.clone();
            next[*id] = Some(v.clone());
            state.picks[axis] = pick;
            self.visit(level + 1, next, bound, weight - used, state);
            if state.stopped || state.tested >= self.max_points {
                return;
            }
        }
    }
}

fn monte_carlo(prepared: &Prepared<'_>, config: &SearchConfig) -> Result<Found, u64> {
    let mut rng = Mcg::new(config.seed);
    let total = config.max_points;
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        let draws: Vec<Vec<usize>> = (start..end)
            .map(|_| {
                prepared
                    .axes
                    .iter()
                    .map(|(_, v)| rng.index(v.len()))
                    .collect()
            })
            .collect();
        let eval = |(off, picks): (usize, &Vec<usize>)| {
            prepared.evaluate(picks, start + off as u64, Strategy::MonteCarlo)
        };
        let hit = if config.deterministic {
            draws.par_iter().enumerate().find_map_first(eval)
        } else {
            draws.par_iter().enumerate().find_map_any(eval)
        };
        if let Some(f) = hit {
            return Ok(f);
        }
        start = end;
    }
    Err(total)
}

/// Every accepted point of a grid strategy, in enumeration order (Monte
/// Carlo: in draw order, duplicates included), up to `config.max_points`
/// points examined.
pub fn collect_solutions(
    p: &UniPoly,
    support: &SupportSet,
    config: &SearchConfig,
) -> Result<Vec<Found>, SolveError> {
    let prepared = match prepare(p, support, config)? {
        Preparation::Ready(pr) => pr,
        _ => return Ok(Vec::new()),
    };
    let strategy = config.strategy;
    if strategy == Strategy::MonteCarlo {
        let mut rng = Mcg::new(config.seed);
        let draws: Vec<Vec<usize>> = (0..config.max_points)
            .map(|_| {
                prepared
                    .axes
                    .iter()
                    .map(|(_, v)| rng.index(v.len()))
                    .collect()
            })
            .collect();
        return Ok(draws
            .par_iter()
            .enumerate()
            .filter_map(|(i, picks)| prepared.evaluate(picks, i as u64, strategy))
            .collect());
    }
    if strategy == Strategy::Sparse {
        let mut all = Vec::new();
        sparse(&prepared, config, &mut |f| {
            all.push(f);
            true
        });
        return Ok(all);
    }
    let total = prepared.grid_size().min(config.max_points);
    Ok((0..total)
        .into_par_iter()
        .filter_map(|i| prepared.evaluate(&prepared.grid_point(i), i, strategy))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn motzkin_projection_is_infeasible() {
        let g = UniPoly::from_terms([(22, int(1)), (14, int(1)), (12, int(-3)), (0, int(1))]);
        let support = SupportSet::new(vec![0, 6, 7, 11]).unwrap();
        let w = diagonal_contradiction(&g, &support).unwrap();
        assert_eq!(w.exponent, 12);
        assert_eq!(w.forced_value, int(-3));
        assert_eq!(w.kind, InfeasibilityKind::NegativeSquareSum);
        match search(&g, &support, &SearchConfig::default()).unwrap() {
            SearchOutcome::Infeasible(w2) => assert_eq!(w2, w),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unreachable_exponent() {
        let g = UniPoly::from_terms([(4, int(1)), (1, int(1)), (0, int(1))]);
        let support = SupportSet::new(vec![0, 2]).unwrap();
        let w = diagonal_contradiction(&g, &support).unwrap();
        assert_eq!(w.exponent, 1);
        assert_eq!(w.kind, InfeasibilityKind::UnreachableExponent);
    }

    #[test]
    fn core_zero_quartic() {
        let p = ints(&[117, -12, -18, 2, 1]);
        let out = search(&p, &SupportSet::dense(2), &SearchConfig::default()).unwrap();
        match out {
            SearchOutcome::Found(f) => {
                assert!(f.outcome.certificate.verify(&p));
                assert_eq!(f.outcome.certificate.strategy, "core_zero");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parallel_schedule_does_not_change_result() {
        let p = ints(&[5, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2]);
        let cfg = SearchConfig::default().with_strategy(Strategy::FullGrid);
        let a = search(&p, &SupportSet::dense(6), &cfg).unwrap();
        let b = search(&p, &SupportSet::dense(6), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exhausted_reports_points() {
        // a wrong border pin leaves a single point, which fails at e = 1
        let p = ints(&[2, 2, 1]);
        let cfg = SearchConfig {
            pins: Assignment::new().with_lower(1, 0, int(5)),
            ..SearchConfig::default()
        };
        match search(&p, &SupportSet::dense(1), &cfg).unwrap() {
            SearchOutcome::Exhausted(e) => assert_eq!(e.points_tested, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_config() {
        let p = ints(&[1, 0, 1]);
        let cfg = SearchConfig {
            diagonal_grid: vec![int(0)],
            ..SearchConfig::default()
        };
        assert!(matches!(
            search(&p, &SupportSet::dense(1), &cfg),
            Err(SolveError::BadConfig(_))
        ));
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [
            Strategy::CoreZero,
            Strategy::FullGrid,
            Strategy::MonteCarlo,
            Strategy::Banded,
        ] {
            assert_eq!(s.name().parse::<Strategy>(), Ok(s));
        }
        assert!("grid".parse::<Strategy>().is_err());
    }
}
