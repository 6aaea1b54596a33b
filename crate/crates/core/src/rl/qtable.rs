use crate::scalar::Scalar;
use crate::{Error, Result};

/// Dense action-value table, zero-initialized.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable<T> {
    n_states: usize,
    n_actions: usize,
    values: Vec<T>,
}

impl<T: Scalar> QTable<T> {
    pub fn new(n_states: usize, n_actions: usize) -> Result<Self> {
        if n_states == 0 || n_actions == 0 {
            return Err(Error::Config(format!(
                "Q-table needs at least one state and action, got {n_states}x{n_actions}"
            )));
        }
        Ok(Self {
            n_states,
            n_actions,
            values: vec![T::zero(); n_states * n_actions],
        })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    fn check_state(&self, state: usize) -> Result<()> {
        if state >= self.n_states {
            return Err(Error::IndexOutOfRange {
                what: "state",
                index: state,
                len: self.n_states,
            });
        }
        Ok(())
    }

    fn index(&self, state: usize, action: usize) -> Result<usize> {
        self.check_state(state)?;
        if action >= self.n_actions {
            return Err(Error::IndexOutOfRange {
                what: "action",
                index: action,
                len: self.n_actions,
            });
        }
        Ok(state * self.n_actions + action)
    }

    pub fn get(&self, state: usize, action: usize) -> Result<T> {
        Ok(self.values[self.index(state, action)?])
    }

    pub fn set(&mut self, state: usize, action: usize, value: T) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFinite("Q-value"));
        }
        let i = self.index(state, action)?;
        self.values[i] = value;
        Ok(())
    }

    pub fn row(&self, state: usize) -> Result<&[T]> {
        self.check_state(state)?;
        let start = state * self.n_actions;
        Ok(&self.values[start..start + self.n_actions])
    }

    /// Argmax over the row; ties go to the lowest action index.
    pub fn greedy(&self, state: usize) -> Result<usize> {
        let row = self.row(state)?;
        let mut best = 0;
        for (a, &v) in row.iter().enumerate().skip(1) {
            if v > row[best] {
                best = a;
            }
        }
        Ok(best)
    }

    pub fn max_value(&self, state: usize) -> Result<T> {
        let row = self.row(state)?;
        Ok(row[self.greedy(state)?])
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_at_zero() {
        let q = QTable::<f64>::new(3, 4).unwrap();
        assert!(q.values().iter().all(|&v| v == 0.0));
        assert_eq!(q.greedy(2).unwrap(), 0);
    }

    #[test]
    fn bounds_checked() {
        let mut q = QTable::<f32>::new(2, 2).unwrap();
        assert!(matches!(q.get(2, 0), Err(Error::IndexOutOfRange { what: "state", .. })));
        assert!(matches!(q.get(0, 2), Err(Error::IndexOutOfRange { what: "action", .. })));
        assert!(q.set(0, 0, f32::NAN).is_err());
        assert!(QTable::<f64>::new(0, 1).is_err());
    }
}
