use serde::{Deserialize, Serialize};

use crate::scalar::{lit, to_f64, Scalar};
use crate::{Error, Result};

/// Hyperparameters of a tabular Q-learner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearningParams<T> {
    pub alpha: T,
    pub gamma: T,
    pub epsilon: T,
    pub epsilon_floor: T,
    /// Number of identical consecutive rewards after which epsilon is halved.
    pub stagnation_window: usize,
}

impl<T: Scalar> Default for LearningParams<T> {
    fn default() -> Self {
        Self {
            alpha: lit(0.9),
            gamma: lit(0.1),
            epsilon: lit(0.2),
            epsilon_floor: lit(0.01),
            stagnation_window: 50,
        }
    }
}

impl<T: Scalar> LearningParams<T> {
    pub fn new(alpha: T, gamma: T, epsilon: T) -> Result<Self> {
        let p = Self {
            alpha,
            gamma,
            epsilon,
            epsilon_floor: lit::<T>(0.01).min(epsilon),
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("alpha", self.alpha),
            ("gamma", self.gamma),
            ("epsilon", self.epsilon),
            ("epsilon_floor", self.epsilon_floor),
        ] {
            if !(v >= T::zero() && v <= T::one()) {
                return Err(Error::range(what, to_f64(v), 0.0, 1.0));
            }
        }
        if self.epsilon_floor > self.epsilon {
            return Err(Error::Config(format!(
                "epsilon_floor {} exceeds epsilon {}",
                self.epsilon_floor, self.epsilon
            )));
        }
        if self.stagnation_window == 0 {
            return Err(Error::Config("stagnation_window must be positive".into()));
        }
        Ok(())
    }
}

/// The three Multisample timescales. `t_a` and `t_l` count base sampling periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeScales {
    /// Base sampling period in seconds.
    pub t_s: f64,
    /// Actuation period.
    pub t_a: usize,
    /// Evaluation period.
    pub t_l: usize,
}

impl TimeScales {
    pub fn new(t_s: f64, t_a: usize, t_l: usize) -> Result<Self> {
        if !(t_s > 0.0) || !t_s.is_finite() {
            return Err(Error::Config(format!("sampling period must be positive, got {t_s}")));
        }
        if t_a == 0 || t_l < t_a {
            return Err(Error::Config(format!(
                "time scales need t_l >= t_a >= 1, got t_l={t_l} t_a={t_a}"
            )));
        }
        Ok(Self { t_s, t_a, t_l })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_hyperparameters() {
        let p = LearningParams::<f64>::default();
        assert_eq!((p.alpha, p.gamma, p.epsilon), (0.9, 0.1, 0.2));
        p.validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(LearningParams::new(1.5_f64, 0.1, 0.2).is_err());
        assert!(LearningParams::new(0.5_f32, -0.1, 0.2).is_err());
        let p = LearningParams::<f64> {
            epsilon_floor: 0.5,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn time_scale_ordering() {
        assert!(TimeScales::new(0.25, 8, 80).is_ok());
        assert!(TimeScales::new(0.25, 12, 10).is_err());
        assert!(TimeScales::new(0.25, 0, 10).is_err());
        assert!(TimeScales::new(0.0, 1, 1).is_err());
    }
}
