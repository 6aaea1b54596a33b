use serde::{Deserialize, Serialize};

use crate::rl::TimeScales;
use crate::{Error, Result};

/// Discretized (T_l, T_a) grid, both in multiples of the sampling period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GovernorGrid {
    t_l_values: Vec<usize>,
    t_a_values: Vec<usize>,
}

/// Grid position of a governor state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GovernorState {
    pub t_l_index: usize,
    pub t_a_index: usize,
}

fn strictly_increasing(xs: &[usize]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

impl GovernorGrid {
    pub fn new(t_l_values: Vec<usize>, t_a_values: Vec<usize>) -> Result<Self> {
        if t_l_values.is_empty() || t_a_values.is_empty() {
            return Err(Error::Config("governor grid axes must be nonempty".into()));
        }
        if !strictly_increasing(&t_l_values) || !strictly_increasing(&t_a_values) {
            return Err(Error::Config("governor grid axes must be strictly increasing".into()));
        }
        if t_a_values[0] == 0 {
            return Err(Error::Config("actuation periods must be positive".into()));
        }
        let grid = Self {
            t_l_values,
            t_a_values,
        };
        if grid.states().is_empty() {
            return Err(Error::Config(
                "governor grid has no state with T_l >= T_a".into(),
            ));
        }
        Ok(grid)
    }

    /// T_l in {80, 90, 100, 110} x T_a in {8..=15}, at T_s = 0.25 s.
    pub fn fcw() -> Self {
        Self::new(vec![80, 90, 100, 110], (8..=15).collect()).expect("valid grid")
    }

    /// T_l in {10, 15, 20, 30} x T_a in {2, 4, ..., 16}, at T_s = 6 min.
    pub fn hvac() -> Self {
        Self::new(vec![10, 15, 20, 30], (1..=8).map(|k| 2 * k).collect()).expect("valid grid")
    }

    pub fn t_l_values(&self) -> &[usize] {
        &self.t_l_values
    }

    pub fn t_a_values(&self) -> &[usize] {
        &self.t_a_values
    }

    pub fn is_valid(&self, s: GovernorState) -> bool {
        s.t_l_index < self.t_l_values.len()
            && s.t_a_index < self.t_a_values.len()
            && self.t_l_values[s.t_l_index] >= self.t_a_values[s.t_a_index]
    }

    /// Every grid pair with T_l >= T_a, row-major in (T_l, T_a).
    pub fn states(&self) -> Vec<GovernorState> {
        let mut out = Vec::new();
        for t_l_index in 0..self.t_l_values.len() {
            for t_a_index in 0..self.t_a_values.len() {
                let s = GovernorState {
                    t_l_index,
                    t_a_index,
                };
                if self.is_valid(s) {
                    out.push(s);
                }
            }
        }
        out
    }

    pub fn index_of(&self, s: GovernorState) -> Option<usize> {
        self.states().iter().position(|&x| x == s)
    }

    /// State with the given period values, if on the grid.
    pub fn find(&self, t_l: usize, t_a: usize) -> Option<GovernorState> {
        let s = GovernorState {
            t_l_index: self.t_l_values.iter().position(|&v| v == t_l)?,
            t_a_index: self.t_a_values.iter().position(|&v| v == t_a)?,
        };
        self.is_valid(s).then_some(s)
    }

    pub fn periods(&self, s: GovernorState) -> (usize, usize) {
        (self.t_l_values[s.t_l_index], self.t_a_values[s.t_a_index])
    }

    pub fn scales(&self, s: GovernorState, t_s: f64) -> TimeScales {
        let (t_l, t_a) = self.periods(s);
        TimeScales { t_s, t_a, t_l }
    }

    pub fn label(&self, s: GovernorState) -> String {
        let (t_l, t_a) = self.periods(s);
        format!("({t_l},{t_a})")
    }
}

pub fn enumerate_governor_states(grid: &GovernorGrid) -> Result<Vec<GovernorState>> {
    let states = grid.states();
    if states.is_empty() {
        return Err(Error::Config("governor grid has no state with T_l >= T_a".into()));
    }
    Ok(states)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    Down,
    Keep,
    Up,
}

impl Step {
    fn apply(self, index: usize, len: usize) -> usize {
        match self {
            Step::Down => index.saturating_sub(1),
            Step::Keep => index,
            Step::Up => (index + 1).min(len - 1),
        }
    }
}

/// One of the nine (T_l, T_a) increment/decrement/keep combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GovernorAction {
    pub t_l: Step,
    pub t_a: Step,
}

impl GovernorAction {
    /// Action order used for Q-table columns; index 0 keeps both periods.
    pub const ALL: [GovernorAction; 9] = {
        use Step::*;
        [
            GovernorAction { t_l: Keep, t_a: Keep },
            GovernorAction { t_l: Keep, t_a: Up },
            GovernorAction { t_l: Up, t_a: Keep },
            GovernorAction { t_l: Up, t_a: Up },
            GovernorAction { t_l: Keep, t_a: Down },
            GovernorAction { t_l: Down, t_a: Keep },
            GovernorAction { t_l: Down, t_a: Down },
            GovernorAction { t_l: Down, t_a: Up },
            GovernorAction { t_l: Up, t_a: Down },
        ]
    };

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

/// Moves each period index by at most one grid step.
///
/// Moves that leave the grid are clamped at the edge; a move that would break
/// T_l >= T_a leaves the offending index where it was (a lowered T_l first, then a
/// raised T_a).
pub fn apply_governor_action(
    grid: &GovernorGrid,
    s: GovernorState,
    a: GovernorAction,
) -> GovernorState {
    let mut next = GovernorState {
        t_l_index: a.t_l.apply(s.t_l_index, grid.t_l_values.len()),
        t_a_index: a.t_a.apply(s.t_a_index, grid.t_a_values.len()),
    };
    if !grid.is_valid(next) && next.t_l_index < s.t_l_index {
        next.t_l_index = s.t_l_index;
    }
    if !grid.is_valid(next) && next.t_a_index > s.t_a_index {
        next.t_a_index = s.t_a_index;
    }
    if !grid.is_valid(next) {
        next = s;
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use Step::*;

    #[test]
    fn fcw_grid_has_32_states() {
        assert_eq!(enumerate_governor_states(&GovernorGrid::fcw()).unwrap().len(), 32);
    }

    #[test]
    fn hvac_grid_has_28_states() {
        // Brute-force count of the stated axes under T_l >= T_a.
        let mut n = 0;
        for t_l in [10, 15, 20, 30] {
            for t_a in (2..=16).step_by(2) {
                if t_l >= t_a {
                    n += 1;
                }
            }
        }
        assert_eq!(n, 28);
        assert_eq!(enumerate_governor_states(&GovernorGrid::hvac()).unwrap().len(), n);
    }

    #[test]
    fn single_point_grid() {
        let g = GovernorGrid::new(vec![10], vec![5]).unwrap();
        assert_eq!(g.states().len(), 1);
    }

    #[test]
    fn empty_grid_rejected() {
        assert!(GovernorGrid::new(vec![4], vec![5, 6]).is_err());
        assert!(GovernorGrid::new(vec![4, 4], vec![1]).is_err());
        assert!(GovernorGrid::new(vec![], vec![1]).is_err());
    }

    #[test]
    fn row_major_order() {
        let g = GovernorGrid::hvac();
        let states = g.states();
        assert_eq!(g.periods(states[0]), (10, 2));
        assert_eq!(g.periods(states[5]), (15, 2));
        assert_eq!(g.periods(*states.last().unwrap()), (30, 16));
    }

    #[test]
    fn adjacent_step() {
        let g = GovernorGrid::fcw();
        let s = g.find(80, 8).unwrap();
        let n = apply_governor_action(&g, s, GovernorAction { t_l: Up, t_a: Up });
        assert_eq!(g.periods(n), (90, 9));
    }

    #[test]
    fn boundary_clamp() {
        let g = GovernorGrid::fcw();
        let s = g.find(110, 15).unwrap();
        let n = apply_governor_action(&g, s, GovernorAction { t_l: Up, t_a: Up });
        assert_eq!(n, s);
    }

    #[test]
    fn constraint_clamp() {
        let g = GovernorGrid::hvac();
        let s = g.find(15, 14).unwrap();
        let n = apply_governor_action(&g, s, GovernorAction { t_l: Down, t_a: Keep });
        assert_eq!(g.periods(n), (15, 14));
        // Lowering T_l while also lowering T_a is fine.
        let n = apply_governor_action(&g, g.find(15, 10).unwrap(), GovernorAction { t_l: Down, t_a: Down });
        assert_eq!(g.periods(n), (10, 8));
    }

    #[test]
    fn every_action_stays_on_grid() {
        let g = GovernorGrid::hvac();
        for s in g.states() {
            for a in GovernorAction::ALL {
                assert!(g.is_valid(apply_governor_action(&g, s, a)));
            }
        }
    }
}
