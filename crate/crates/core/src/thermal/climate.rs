use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Scalar};

const DAY: f64 = 86_400.0;

/// Outdoor temperature: a base value, a daily sinusoid and a random offset per day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutdoorClimate {
    pub seed: u64,
    pub base_c: f64,
    pub amplitude_c: f64,
    pub max_daily_offset_c: f64,
}

impl OutdoorClimate {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            base_c: 10.0,
            amplitude_c: 3.0,
            max_daily_offset_c: 2.0,
        }
    }

    pub fn daily_offset(&self, day: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(day);
        rng.gen_range(-self.max_daily_offset_c..=self.max_daily_offset_c)
    }

    /// Temperature at `clock` seconds; coldest at 03:00, warmest at 15:00.
    pub fn temperature<T: Scalar>(&self, clock: f64) -> T {
        let day = (clock / DAY).floor().max(0.0) as u64;
        let phase = TAU * ((clock / DAY).rem_euclid(1.0) - 0.375);
        lit(self.base_c + self.amplitude_c * phase.sin() + self.daily_offset(day))
    }
}

/// Draws a climate from `rng` and evaluates it at `clock`.
pub fn outdoor_temperature<T: Scalar, R: Rng + ?Sized>(clock: f64, rng: &mut R) -> T {
    OutdoorClimate::new(rng.gen()).temperature(clock)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_and_deterministic() {
        let c = OutdoorClimate::new(7);
        for k in 0..(5 * 24 * 10) {
            let t: f64 = c.temperature(k as f64 * 360.0);
            assert!((5.0..=15.0).contains(&t), "{t}");
            assert_eq!(t, OutdoorClimate::new(7).temperature::<f64>(k as f64 * 360.0));
        }
        let mut a = crate::SimRng::seed_from_u64(1);
        let mut b = crate::SimRng::seed_from_u64(1);
        assert_eq!(outdoor_temperature::<f64, _>(100.0, &mut a), outdoor_temperature::<f64, _>(100.0, &mut b));
    }

    #[test]
    fn daily_mean_is_base_plus_offset() {
        let c = OutdoorClimate::new(3);
        for day in 0..4u64 {
            let n = 1440;
            let m: f64 = (0..n)
                .map(|i| c.temperature::<f64>(day as f64 * DAY + i as f64 * 60.0))
                .sum::<f64>()
                / n as f64;
            assert!((m - 10.0 - c.daily_offset(day)).abs() < 1e-6);
        }
    }

    #[test]
    fn shape() {
        let c = OutdoorClimate { max_daily_offset_c: 0.0, ..OutdoorClimate::new(0) };
        assert!((c.temperature::<f64>(3.0 * 3600.0) - 7.0).abs() < 1e-9);
        assert!((c.temperature::<f64>(15.0 * 3600.0) - 13.0).abs() < 1e-9);
    }
}
