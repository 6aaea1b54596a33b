use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::governor::{GovernorGrid, GovernorState, TunableSystem};
use crate::scalar::{to_f64, Scalar};
use crate::{Error, Result, SimRng};

/// Measured performance of every state of an enumerated state set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerformanceMap {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    pub samples_per_state: usize,
    pub warmup: usize,
    pub seed: u64,
}

impl PerformanceMap {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Best state, ties to the lowest index.
    pub fn argmax(&self) -> usize {
        (0..self.values.len()).fold(0, |b, i| if self.values[i] > self.values[b] { i } else { b })
    }

    pub fn max(&self) -> f64 {
        self.values[self.argmax()]
    }

    /// 1 for the best state.
    pub fn rank(&self, i: usize) -> usize {
        1 + self.values.iter().filter(|&&v| v > self.values[i]).count()
    }

    /// `(max - value) / max`.
    pub fn relative_gap(&self, i: usize) -> f64 {
        let m = self.max();
        if m == 0.0 {
            0.0
        } else {
            (m - self.values[i]) / m
        }
    }
}

/// Stream seed for `(seed, stream)`: independent, reproducible sub-seeds.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut r = SimRng::seed_from_u64(seed);
    r.set_stream(stream);
    r.gen()
}

/// Measures every state on a fresh system from `make`. Each state runs `warmup`
/// unscored evaluations and averages `samples` scored ones, all driven from the same
/// learner seed so states differ only by their own parameters.
pub fn brute_force_performance_map<K, S, M, E>(
    states: &[K],
    labels: impl Fn(&K) -> String,
    mut make: M,
    mut measure: E,
    warmup: usize,
    samples: usize,
    seed: u64,
) -> Result<PerformanceMap>
where
    M: FnMut(&K) -> Result<S>,
    E: FnMut(&mut S, &K, &mut SimRng) -> Result<f64>,
{
    if samples == 0 {
        return Err(Error::Config("oracle needs at least one sample per state".into()));
    }
    let mut values = Vec::with_capacity(states.len());
    for k in states {
        let wrap = |e| Error::Oracle {
            state: labels(k),
            source: Box::new(e),
        };
        let mut rng = SimRng::seed_from_u64(seed);
        let mut sys = make(k).map_err(wrap)?;
        for _ in 0..warmup {
            measure(&mut sys, k, &mut rng).map_err(wrap)?;
        }
        let mut acc = 0.0;
        for _ in 0..samples {
            acc += measure(&mut sys, k, &mut rng).map_err(wrap)?;
        }
        values.push(acc / samples as f64);
    }
    Ok(PerformanceMap {
        labels: states.iter().map(labels).collect(),
        values,
        samples_per_state: samples,
        warmup,
        seed,
    })
}

/// Oracle over a governor grid: every (T_l, T_a) state measured on a fresh system.
pub fn governor_oracle<T, S, M>(
    grid: &GovernorGrid,
    t_s: f64,
    make: M,
    warmup: usize,
    samples: usize,
    seed: u64,
) -> Result<PerformanceMap>
where
    T: Scalar,
    S: TunableSystem<T>,
    M: FnMut(&GovernorState) -> Result<S>,
{
    brute_force_performance_map(
        &grid.states(),
        |s| grid.label(*s),
        make,
        |sys: &mut S, s, rng| sys.evaluate(&grid.scales(*s, t_s), rng).map(to_f64),
        warmup,
        samples,
        seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rl::TimeScales;

    /// Performance peaks at one planted (T_l, T_a).
    struct Planted {
        t_l: usize,
        t_a: usize,
    }

    impl TunableSystem<f64> for Planted {
        fn evaluate<R: Rng + ?Sized>(&mut self, s: &TimeScales, rng: &mut R) -> Result<f64> {
            let d = (s.t_l as f64 - self.t_l as f64).abs() / 30.0 + (s.t_a as f64 - self.t_a as f64).abs() / 7.0;
            Ok((1.0 - d / 2.0 + rng.gen_range(-0.01..0.01)).clamp(0.0, 1.0))
        }
    }

    #[test]
    fn finds_planted_optimum() {
        let grid = GovernorGrid::fcw();
        let map = governor_oracle(&grid, 0.25, |_| Ok(Planted { t_l: 100, t_a: 13 }), 0, 3, 1).unwrap();
        assert_eq!(map.len(), 32);
        assert_eq!(map.labels[map.argmax()], grid.label(grid.find(100, 13).unwrap()));
        assert_eq!(map.rank(map.argmax()), 1);
        assert_eq!(map.relative_gap(map.argmax()), 0.0);
        let again = governor_oracle(&grid, 0.25, |_| Ok(Planted { t_l: 100, t_a: 13 }), 0, 3, 1).unwrap();
        assert_eq!(map, again);
    }

    #[test]
    fn single_state() {
        let grid = GovernorGrid::new(vec![10], vec![5]).unwrap();
        let map = governor_oracle(&grid, 1.0, |_| Ok(Planted { t_l: 10, t_a: 5 }), 1, 1, 0).unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(map.argmax(), 0);
    }

    #[test]
    fn errors_name_the_state() {
        let grid = GovernorGrid::new(vec![10], vec![5]).unwrap();
        let err = governor_oracle::<f64, Planted, _>(&grid, 1.0, |_| Err(Error::NonFinite("x")), 0, 1, 0).unwrap_err();
        assert!(matches!(err, Error::Oracle { .. }));
        assert!(governor_oracle(&grid, 1.0, |_| Ok(Planted { t_l: 10, t_a: 5 }), 0, 0, 0).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_eq!(derive_seed(1, 0), derive_seed(1, 0));
    }
}
