use serde::{Deserialize, Serialize};

use crate::scalar::{lit, sign, to_f64, Scalar};
use crate::{Error, Result};

pub const GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleParams<T> {
    /// kg
    pub mass: T,
    /// N
    pub max_brake_force: T,
    /// N
    pub max_accel_force: T,
    pub rolling_friction: T,
}

impl<T: Scalar> Default for VehicleParams<T> {
    fn default() -> Self {
        Self {
            mass: lit(1500.0),
            max_brake_force: lit(12_000.0),
            max_accel_force: lit(4_500.0),
            rolling_friction: lit(0.01),
        }
    }
}

impl<T: Scalar> VehicleParams<T> {
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("mass", self.mass),
            ("max brake force", self.max_brake_force),
            ("max accel force", self.max_accel_force),
        ] {
            if !(v > T::zero()) {
                return Err(Error::range(what, to_f64(v), 0.0, f64::INFINITY));
            }
        }
        let f = to_f64(self.rolling_friction);
        if !(0.0..=0.05).contains(&f) {
            return Err(Error::range("rolling friction", f, 0.0, 0.05));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vehicle<T> {
    /// m
    pub position: T,
    /// m/s
    pub velocity: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehiclePairState<T> {
    pub ego: Vehicle<T>,
    pub lead: Vehicle<T>,
    /// s
    pub clock: f64,
}

impl<T: Scalar> VehiclePairState<T> {
    pub fn new(ego: Vehicle<T>, lead: Vehicle<T>) -> Result<Self> {
        if lead.position < ego.position {
            return Err(Error::Config("lead car must start ahead of the ego car".into()));
        }
        if ego.velocity < T::zero() || lead.velocity < T::zero() {
            return Err(Error::Config("velocities must be nonnegative".into()));
        }
        Ok(Self { ego, lead, clock: 0.0 })
    }

    pub fn gap(&self) -> T {
        self.lead.position - self.ego.position
    }

    /// Positive when the ego car is catching up.
    pub fn closing_speed(&self) -> T {
        self.ego.velocity - self.lead.velocity
    }
}

/// Point-mass Euler step. Positive pedal accelerates, negative brakes.
pub fn step_vehicle<T: Scalar>(v: &Vehicle<T>, params: &VehicleParams<T>, pedal: T, dt: T) -> Vehicle<T> {
    let pedal = pedal.max(-T::one()).min(T::one());
    let force = if pedal >= T::zero() {
        pedal * params.max_accel_force
    } else {
        pedal * params.max_brake_force
    };
    let accel = force / params.mass - params.rolling_friction * lit(GRAVITY) * sign(v.velocity);
    Vehicle {
        position: v.position + dt * v.velocity,
        velocity: (v.velocity + dt * accel).max(T::zero()),
    }
}
