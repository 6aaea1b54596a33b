use serde::{Deserialize, Serialize};

use crate::scalar::{lit, sign, to_f64, Scalar};
use crate::{Error, Result};

/// How the performance change is turned into a reward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewardVariant {
    /// `sign(dp) * stepweight(|dp|)`.
    Generic,
    /// `sign(dp) * stepweight(|dp|) * p_next`.
    SignedStep,
}

/// Increasing step function of a performance difference: 1 below 0.05, 2 below
/// 0.15, 3 otherwise.
pub fn step_weight<T: Scalar>(delta: T) -> T {
    if delta < lit(0.05) {
        T::one()
    } else if delta < lit(0.15) {
        lit(2.0)
    } else {
        lit(3.0)
    }
}

pub fn governor_reward<T: Scalar>(p_prev: T, p_next: T, variant: RewardVariant) -> Result<T> {
    for (what, p) in [("p_prev", p_prev), ("p_next", p_next)] {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::range(what, to_f64(p), 0.0, 1.0));
        }
    }
    let delta = p_next - p_prev;
    let w = sign(delta) * step_weight(delta.abs());
    Ok(match variant {
        RewardVariant::Generic => w,
        RewardVariant::SignedStep => w * p_next,
    })
}
