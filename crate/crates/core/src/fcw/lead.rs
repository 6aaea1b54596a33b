use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LeadPhase<T> {
    Cruise,
    Braking { target: T, decel: T },
    Recover,
}

/// Scripted lead car: cruises, occasionally brakes hard down to a fraction of its
/// cruising speed, then recovers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadScript<T> {
    /// m/s
    pub cruise_speed: T,
    /// Braking events per second while cruising.
    pub event_rate: f64,
    /// Deceleration range of a braking event, m/s^2.
    pub decel: (f64, f64),
    /// Target speed range as a fraction of the cruising speed.
    pub slowdown: (f64, f64),
    /// m/s^2
    pub recover_accel: T,
    pub phase: LeadPhase<T>,
}

impl<T: Scalar> Default for LeadScript<T> {
    fn default() -> Self {
        Self {
            cruise_speed: lit(22.0),
            event_rate: 1.0 / 25.0,
            decel: (4.0, 8.0),
            slowdown: (0.2, 0.6),
            recover_accel: lit(2.0),
            phase: LeadPhase::Cruise,
        }
    }
}

impl<T: Scalar> LeadScript<T> {
    /// New lead speed after `dt` seconds.
    pub fn step<R: Rng + ?Sized>(&mut self, velocity: T, dt: f64, rng: &mut R) -> T {
        let dtt = lit::<T>(dt);
        match self.phase {
            LeadPhase::Cruise => {
                if rng.gen_bool((self.event_rate * dt).clamp(0.0, 1.0)) {
                    let frac = rng.gen_range(self.slowdown.0..=self.slowdown.1);
                    let decel = rng.gen_range(self.decel.0..=self.decel.1);
                    self.phase = LeadPhase::Braking {
                        target: self.cruise_speed * lit(frac),
                        decel: lit(decel),
                    };
                }
                self.cruise_speed
            }
            LeadPhase::Braking { target, decel } => {
                let v = velocity - decel * dtt;
                if v <= target {
                    self.phase = LeadPhase::Recover;
                    target
                } else {
                    v
                }
            }
            LeadPhase::Recover => {
                let v = velocity + self.recover_accel * dtt;
                if v >= self.cruise_speed {
                    self.phase = LeadPhase::Cruise;
                    self.cruise_speed
                } else {
                    v
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SimRng;
    use rand::SeedableRng;

    #[test]
    fn brakes_and_recovers() {
        let mut s = LeadScript::<f64>::default();
        let mut rng = SimRng::seed_from_u64(2);
        let mut v = 22.0;
        let mut min = v;
        for _ in 0..(600 * 4) {
            v = s.step(v, 0.25, &mut rng);
            assert!((0.0..=22.0).contains(&v));
            min = min.min(v);
        }
        assert!(min <= 0.6 * 22.0 + 1e-9);
    }
}
