use serde::{Deserialize, Serialize};

use crate::scalar::{lit, mean, std_dev, to_f64, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComfortConfig<T> {
    pub theta1: T,
    pub theta2: T,
    /// Samples in the moving window.
    pub window: usize,
}

impl<T: Scalar> Default for ComfortConfig<T> {
    fn default() -> Self {
        Self {
            theta1: lit(0.7),
            theta2: lit(0.3),
            window: 240,
        }
    }
}

impl<T: Scalar> ComfortConfig<T> {
    pub fn new(theta1: T, theta2: T, window: usize) -> Result<Self> {
        let c = Self { theta1, theta2, window };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta1 > self.theta2 && self.theta2 > T::zero()) {
            return Err(Error::Config(format!(
                "comfort weights need theta1 > theta2 > 0, got {} and {}",
                self.theta1, self.theta2
            )));
        }
        if (to_f64(self.theta1 + self.theta2) - 1.0).abs() > 1e-6 {
            return Err(Error::Config("comfort weights must sum to 1".into()));
        }
        if self.window == 0 {
            return Err(Error::Config("comfort window must be positive".into()));
        }
        Ok(())
    }
}

/// `theta1 * mean(|pmv|) + theta2 * std(pmv)` over every sample given.
pub fn discomfort<T: Scalar>(samples: &[T], cfg: &ComfortConfig<T>) -> Result<T> {
    let abs: Vec<T> = samples.iter().map(|p| p.abs()).collect();
    let ma = mean(&abs).ok_or(Error::InsufficientData { needed: 1, got: 0 })?;
    let sd = std_dev(samples).expect("nonempty");
    Ok(cfg.theta1 * ma + cfg.theta2 * sd)
}

/// `1 - discomfort / 3`, clamped to [0, 1].
pub fn goodness<T: Scalar>(samples: &[T], cfg: &ComfortConfig<T>) -> Result<T> {
    let d = discomfort(samples, cfg)?;
    Ok((T::one() - d / lit(3.0)).max(T::zero()).min(T::one()))
}

/// Comfort goodness over the last `cfg.window` samples of a PMV series.
pub fn hvac_performance<T: Scalar>(series: &[T], cfg: &ComfortConfig<T>) -> Result<T> {
    if series.len() < cfg.window {
        return Err(Error::InsufficientData {
            needed: cfg.window,
            got: series.len(),
        });
    }
    goodness(&series[series.len() - cfg.window..], cfg)
}
