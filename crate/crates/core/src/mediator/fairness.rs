use serde::{Deserialize, Serialize};

use crate::governor::{governor_reward, step_weight, RewardVariant};
use crate::mediator::WeightState;
use crate::scalar::{sign, to_f64, Scalar};
use crate::{Error, Result};

/// Mix between performance (0) and fairness (1) in the mediator reward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairnessParams<T> {
    pub zeta: T,
}

impl<T: Scalar> FairnessParams<T> {
    pub fn new(zeta: T) -> Result<Self> {
        if !(zeta >= T::zero() && zeta <= T::one()) {
            return Err(Error::range("zeta", to_f64(zeta), 0.0, 1.0));
        }
        Ok(Self { zeta })
    }
}

/// Recency-weighted average weight each human has received:
/// `u_h(t) = (1/t) * sum_{j=0..t} (j/t) * w_h(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityTracker<T> {
    history: Vec<Vec<T>>,
    utilities: Vec<T>,
}

impl<T: Scalar> UtilityTracker<T> {
    pub fn new(n_humans: usize) -> Self {
        Self {
            history: Vec::new(),
            utilities: vec![T::zero(); n_humans],
        }
    }

    /// Index of the newest sample; utilities are zero until it reaches 1.
    pub fn t(&self) -> usize {
        self.history.len().saturating_sub(1)
    }

    pub fn utilities(&self) -> &[T] {
        &self.utilities
    }

    pub fn push(&mut self, weights: &[T]) {
        assert_eq!(weights.len(), self.utilities.len(), "weight vector length");
        self.history.push(weights.to_vec());
        let t = self.t();
        if t == 0 {
            return;
        }
        let t = T::from_usize(t).expect("t fits");
        for (h, u) in self.utilities.iter_mut().enumerate() {
            let acc: T = self
                .history
                .iter()
                .enumerate()
                .map(|(j, w)| T::from_usize(j).expect("j fits") * w[h])
                .sum();
            *u = acc / (t * t);
        }
    }

    pub fn cv(&self) -> Result<T> {
        coefficient_of_variation(&self.utilities)
    }
}

pub fn update_utilities<T: Scalar>(tracker: &mut UtilityTracker<T>, weights: &WeightState) {
    tracker.push(&weights.weights::<T>());
}

/// `sqrt( (1/(n-1)) * sum_h (u_h - mean)^2 / mean^2 )`.
pub fn coefficient_of_variation<T: Scalar>(utilities: &[T]) -> Result<T> {
    let n = utilities.len();
    if n < 2 {
        return Err(Error::Config(format!("coefficient of variation needs n >= 2, got {n}")));
    }
    let nf = T::from_usize(n).expect("n fits");
    let mean = utilities.iter().copied().sum::<T>() / nf;
    if mean == T::zero() {
        return Err(Error::DegenerateFairness);
    }
    let ss: T = utilities.iter().map(|&u| (u - mean) * (u - mean)).sum();
    Ok((ss / (mean * mean) / (nf - T::one())).sqrt())
}

/// Positive when the coefficient of variation decreased.
pub fn fairness_reward<T: Scalar>(cv_prev: T, cv_next: T) -> T {
    let delta = cv_prev - cv_next;
    sign(delta) * step_weight(delta.abs())
}

/// `(1 - zeta) * W(p_next, p_prev) + zeta * F(cv_next, cv_prev)`.
///
/// A missing coefficient of variation (no utilities yet) contributes no fairness term.
pub fn mediator_reward<T: Scalar>(
    p_prev: T,
    p_next: T,
    cv_prev: Option<T>,
    cv_next: Option<T>,
    fairness: &FairnessParams<T>,
) -> Result<T> {
    let w = governor_reward(p_prev, p_next, RewardVariant::Generic)?;
    let f = match (cv_prev, cv_next) {
        (Some(a), Some(b)) => {
            if !(a >= T::zero() && b >= T::zero()) {
                return Err(Error::range("cv", to_f64(a.min(b)), 0.0, f64::INFINITY));
            }
            fairness_reward(a, b)
        }
        _ => T::zero(),
    };
    let zeta = fairness.zeta;
    if zeta == T::zero() {
        return Ok(w);
    }
    if zeta == T::one() {
        return Ok(f);
    }
    Ok((T::one() - zeta) * w + zeta * f)
}
