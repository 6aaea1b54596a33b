use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::fcw::VehiclePairState;
use crate::scalar::{lit, to_f64, Scalar};
use crate::{Error, Result};

/// How long an alarm-triggered brake press lasts once started, s.
const RESPONSE_HOLD: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriverProfile<T> {
    pub id: String,
    pub brake_intensity: T,
    pub accel_intensity: T,
    /// m
    pub preferred_gap: T,
    /// Reaction delay to an alarm, sampled uniformly from this range, s.
    pub response_time: (f64, f64),
    /// Cruising speed the driver aims for on an open road, m/s.
    pub desired_speed: T,
}

impl<T: Scalar> DriverProfile<T> {
    /// Average braking, average reaction.
    pub fn h1() -> Self {
        Self {
            id: "H1".into(),
            brake_intensity: lit(0.6),
            accel_intensity: lit(0.6),
            preferred_gap: lit(15.0),
            response_time: (0.7, 1.3),
            desired_speed: lit(25.0),
        }
    }

    /// Aggressive: hard pedals, short gap, quick reaction.
    pub fn h2() -> Self {
        Self {
            id: "H2".into(),
            brake_intensity: lit(0.9),
            accel_intensity: lit(0.9),
            preferred_gap: lit(10.0),
            response_time: (0.3, 0.7),
            desired_speed: lit(25.0),
        }
    }

    /// Slow: gentle pedals, long gap, late reaction.
    pub fn h3() -> Self {
        Self {
            id: "H3".into(),
            brake_intensity: lit(0.35),
            accel_intensity: lit(0.35),
            preferred_gap: lit(25.0),
            response_time: (1.3, 2.0),
            desired_speed: lit(25.0),
        }
    }

    pub fn standard(id: &str) -> Option<Self> {
        match id {
            "H1" | "h1" => Some(Self::h1()),
            "H2" | "h2" => Some(Self::h2()),
            "H3" | "h3" => Some(Self::h3()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |what, v: T| {
            let x = to_f64(v);
            if (0.0..=1.0).contains(&x) && x > 0.0 {
                Ok(())
            } else {
                Err(Error::range(what, x, 0.0, 1.0))
            }
        };
        unit("brake intensity", self.brake_intensity)?;
        unit("accel intensity", self.accel_intensity)?;
        let (lo, hi) = self.response_time;
        if !(lo >= 0.0 && hi >= lo) {
            return Err(Error::Config(format!("{}: bad response time range {lo}..{hi}", self.id)));
        }
        if !(self.preferred_gap > T::zero() && self.desired_speed > T::zero()) {
            return Err(Error::Config(format!("{}: gap and speed must be positive", self.id)));
        }
        Ok(())
    }

    pub fn sample_response_time<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (lo, hi) = self.response_time;
        if hi > lo {
            rng.gen_range(lo..=hi)
        } else {
            lo
        }
    }
}

/// Pending and active alarm responses.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DriverState {
    /// Clock at which a scheduled brake press starts.
    pub pending: Option<f64>,
    /// Clock until which an alarm-triggered press is held.
    pub braking_until: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriverCommand<T> {
    pub pedal: T,
    /// The pedal comes from an alarm response rather than normal following.
    pub responding: bool,
}

/// One tick of the driver. An alarm schedules a full brake press after a sampled
/// reaction delay; otherwise the driver follows the lead at its preferred gap.
pub fn driver_step<T: Scalar, R: Rng + ?Sized>(
    profile: &DriverProfile<T>,
    ds: &mut DriverState,
    alarm: bool,
    state: &VehiclePairState<T>,
    rng: &mut R,
) -> DriverCommand<T> {
    let now = state.clock;
    if alarm && ds.pending.is_none() && ds.braking_until.is_none_or(|t| now >= t) {
        ds.pending = Some(now + profile.sample_response_time(rng));
    }
    if let Some(due) = ds.pending {
        if now >= due {
            ds.pending = None;
            ds.braking_until = Some(now + RESPONSE_HOLD);
        }
    }
    if let Some(until) = ds.braking_until {
        if now < until || alarm {
            if alarm && now >= until {
                ds.braking_until = Some(now + RESPONSE_HOLD);
            }
            return DriverCommand {
                pedal: -T::one(),
                responding: true,
            };
        }
        ds.braking_until = None;
    }
    let gap = state.gap();
    let pedal = if gap < profile.preferred_gap {
        -profile.brake_intensity
    } else if gap > profile.preferred_gap * lit(1.3) && state.ego.velocity < profile.desired_speed {
        profile.accel_intensity
    } else {
        T::zero()
    };
    DriverCommand {
        pedal,
        responding: false,
    }
}
