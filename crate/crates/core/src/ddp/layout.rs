//! Unknown layout of the lower-triangular scheme and the coefficient
//! equations it induces.
//!
//! Over an ascending support `s₀ < … < s_l` row `j` is the square
//! `qⱼ = t^{sⱼ} + Σ_{k<j} L[j][k]·t^{s_k}` with multiplier `dⱼ`; the top
//! multiplier `d_l` is fixed to 1. The coefficient of `t^e` in
//! `Σ dⱼ·qⱼ²` is a sum of terms `c·dⱼ·L[j][k]·L[j][m]` (`k ≤ m ≤ j`,
//! `s_k + s_m = e`, `c = 2` when `k ≠ m`, `L[j][j] = 1`).

use std::collections::BTreeSet;

use super::SupportSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// `dⱼ` for a row below the top.
    Multiplier { row: usize },
    /// `L[row][col]`, `col < row`.
    Lower { row: usize, col: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotClass {
    /// Last row, first column and the lowest multiplier.
    Border,
    /// Multipliers of the intermediate rows.
    Diagonal,
    /// Strict interior of the triangle.
    Core,
}

/// One product `coef · Π factors`; factors are slot ids.
#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub coef: u8,
    pub factors: [usize; 3],
    pub len: u8,
}

impl Term {
    pub fn factors(&self) -> &[usize] {
        &self.factors[..self.len as usize]
    }
}

/// Role of a slot in a search plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Pinned,
    /// Supplied by the grid.
    Grid,
    /// Determined by the triangular solve.
    Solved,
    /// Never appears in a live equation; set to 0.
    Idle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanError {
    /// Two or more border unknowns enter the same equation first.
    UnderDetermined { exponent: u64 },
    /// A border unknown first appears squared.
    Nonlinear { exponent: u64 },
}

impl std::fmt::Display for PlanError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PlanError::UnderDetermined { exponent } => {
                write!(f, "under-determined at e={exponent}")
            }
            PlanError::Nonlinear { exponent } => {
                write!(f, "nonlinear border equation at e={exponent}")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Plan {
    pub roles: Vec<Role>,
    /// Grid-driven slot ids in enumeration order: multipliers by descending
    /// row, then lower entries by descending row and column.
    pub grid: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Layout {
    support: SupportSet,
    l: usize,
    slots: Vec<Slot>,
    /// Indexed by exponent `0..=2N`.
    pub(crate) equations: Vec<Vec<Term>>,
}

impl Layout {
    pub fn new(support: &SupportSet) -> Self {
        let s = support.powers();
        let l = s.len() - 1;
        let mut slots: Vec<Slot> = (0..l).map(|row| Slot::Multiplier { row }).collect();
        for row in 1..=l {
            for col in 0..row {
                slots.push(Slot::Lower { row, col });
            }
        }
        let top = 2 * s[l] as usize;
        let mut equations: Vec<Vec<Term>> = vec![Vec::new(); top + 1];
        let lower_id = |row: usize, col: usize| l + row * (row - 1) / 2 + col;
        for j in 0..=l {
            for m in 0..=j {
                for k in 0..=m {
                    let e = (s[k] + s[m]) as usize;
                    let mut factors = [0usize; 3];
                    let mut len = 0u8;
                    let mut push = |id: usize| {
                        factors[len as usize] = id;
                        len += 1;
                    };
                    if j < l {
                        push(j);
                    }
                    if k < j {
                        push(lower_id(j, k));
                    }
                    if m < j {
                        push(lower_id(j, m));
                    }
                    let coef = if k == m { 1 } else { 2 };
                    equations[e].push(Term { coef, factors, len });
                }
            }
        }
        Self {
            support: support.clone(),
            l,
            slots,
            equations,
        }
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    /// Index of the top row.
    pub fn top_row(&self) -> usize {
        self.l
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn slot(&self, id: usize) -> Slot {
        self.slots[id]
    }

    pub fn slot_id(&self, slot: Slot) -> Option<usize> {
        match slot {
            Slot::Multiplier { row } if row < self.l => Some(row),
            Slot::Lower { row, col } if col < row && row <= self.l => {
                Some(self.l + row * (row - 1) / 2 + col)
            }
            _ => None,
        }
    }

    pub fn class(&self, id: usize) -> SlotClass {
        match self.slots[id] {
            Slot::Multiplier { row: 0 } => SlotClass::Border,
            Slot::Multiplier { .. } => SlotClass::Diagonal,
            Slot::Lower { row, col } if row == self.l || col == 0 => SlotClass::Border,
            Slot::Lower { .. } => SlotClass::Core,
        }
    }

    /// Support exponent of a row.
    pub fn exponent(&self, row: usize) -> u64 {
        self.support.powers()[row]
    }

    /// Row index of a support exponent.
    pub fn row_of(&self, exponent: u64) -> Option<usize> {
        self.support.powers().binary_search(&exponent).ok()
    }

    /// Highest exponent whose equation mentions slot `id`.
    pub fn first_equation(&self, id: usize) -> Option<usize> {
        (0..self.equations.len())
            .rev()
            .find(|&e| self.equations[e].iter().any(|t| t.factors().contains(&id)))
    }

    /// Decides which free slots the grid supplies, treating every unknown
    /// as generic and nonzero. `pinned_zero[id]` is `Some(is_zero)` for
    /// pinned slots.
    pub fn plan(&self, pinned_zero: &[Option<bool>]) -> Result<Plan, PlanError> {
        let n = self.slots.len();
        let mut roles: Vec<Option<Role>> = pinned_zero
            .iter()
            .map(|p| p.map(|_| Role::Pinned))
            .collect();
        for e in (0..self.equations.len()).rev() {
            let mut unknown: BTreeSet<usize> = BTreeSet::new();
            let mut squared: BTreeSet<usize> = BTreeSet::new();
            for term in &self.equations[e] {
                let fs = term.factors();
                if fs.iter().any(|&f| pinned_zero[f] == Some(true)) {
                    continue;
                }
                for (i, &f) in fs.iter().enumerate() {
                    if roles[f].is_none() {
                        unknown.insert(f);
                        if fs[i + 1..].contains(&f) {
                            squared.insert(f);
                        }
                    }
                }
            }
            if unknown.is_empty() {
                continue;
            }
            let borders: Vec<usize> = unknown
                .iter()
                .copied()
                .filter(|&id| self.class(id) == SlotClass::Border)
                .collect();
            let exponent = e as u64;
            let solved = match borders.as_slice() {
                [b] if squared.contains(b) => return Err(PlanError::Nonlinear { exponent }),
                [b] => Some(*b),
                [] => self.pick_free(&unknown, &squared),
                _ => return Err(PlanError::UnderDetermined { exponent }),
            };
            for id in unknown {
                roles[id] = Some(if Some(id) == solved {
                    Role::Solved
                } else {
                    Role::Grid
                });
            }
        }
        let roles: Vec<Role> = roles.into_iter().map(|r| r.unwrap_or(Role::Idle)).collect();
        let mut grid: Vec<usize> = (0..n).filter(|&id| roles[id] == Role::Grid).collect();
        grid.sort_by_key(|&id| self.enumeration_key(id));
        Ok(Plan { roles, grid })
    }

    /// Multipliers first, higher rows first; then lower entries by
    /// descending row and column.
    fn enumeration_key(
        &self,
        id: usize,
    ) -> (u8, std::cmp::Reverse<usize>, std::cmp::Reverse<usize>) {
        use std::cmp::Reverse;
        match self.slots[id] {
            Slot::Multiplier { row } => (0, Reverse(row), Reverse(0)),
            Slot::Lower { row, col } => (1, Reverse(row), Reverse(col)),
        }
    }

    fn pick_free(&self, unknown: &BTreeSet<usize>, squared: &BTreeSet<usize>) -> Option<usize> {
        let mut diagonals: Vec<usize> = unknown
            .iter()
            .copied()
            .filter(|&id| self.class(id) == SlotClass::Diagonal)
            .collect();
        diagonals.sort_by_key(|&id| self.enumeration_key(id));
        if let Some(&d) = diagonals.first() {
            return Some(d);
        }
        let mut cores: Vec<usize> = unknown
            .iter()
            .copied()
            .filter(|&id| self.class(id) == SlotClass::Core && !squared.contains(&id))
            .collect();
        cores.sort_by_key(|&id| self.enumeration_key(id));
        cores.first().copied()
    }
}
