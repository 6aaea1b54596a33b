use rand::Rng;

use crate::rl::{q_update, select_action, LearningParams, QTable, TimeScales};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// An environment the Multisample learner can drive one sampling period at a time.
pub trait Environment<T: Scalar> {
    fn n_states(&self) -> usize;
    fn n_actions(&self) -> usize;

    /// Resets per-run statistics. Physical state carries over between runs.
    fn begin_run(&mut self, _scales: &TimeScales) {}

    /// Discrete state index as currently observed.
    fn observe(&self) -> usize;

    /// Applies `action` and returns the action to credit for it. Environments that
    /// mediate actions return the index of the action actually in force.
    fn actuate(&mut self, action: usize) -> usize;

    /// Advances by one sampling period and records a sample.
    fn advance<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()>;

    /// Reward for the samples recorded since the previous call.
    fn window_reward(&mut self) -> T;

    /// Closes the run and returns its performance signal.
    fn end_run(&mut self) -> Result<T>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionRecord {
    pub tick: usize,
    pub state: usize,
    pub action: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultisampleRun<T> {
    pub performance: T,
    pub actions: Vec<ActionRecord>,
    pub observations: usize,
    pub updates: usize,
}

impl<T> MultisampleRun<T> {
    pub fn actuations(&self) -> usize {
        self.actions.len()
    }
}

/// Runs the learner for `duration` sampling periods.
///
/// The environment is sampled every tick, actuated every `t_a` ticks and, at each
/// `t_l` boundary, the window reward is credited to the (state, action) in force
/// when the window opened.
pub fn multisample_run<T, E, R>(
    env: &mut E,
    q: &mut QTable<T>,
    scales: &TimeScales,
    params: &LearningParams<T>,
    duration: usize,
    rng: &mut R,
) -> Result<MultisampleRun<T>>
where
    T: Scalar,
    E: Environment<T>,
    R: Rng + ?Sized,
{
    if duration == 0 || !duration.is_multiple_of(scales.t_l) {
        return Err(Error::Config(format!(
            "run duration {duration} is not a positive multiple of t_l={}",
            scales.t_l
        )));
    }
    if scales.t_a == 0 || scales.t_l < scales.t_a {
        return Err(Error::Config(format!(
            "time scales need t_l >= t_a >= 1, got t_l={} t_a={}",
            scales.t_l, scales.t_a
        )));
    }
    if q.n_states() != env.n_states() || q.n_actions() != env.n_actions() {
        return Err(Error::Config(format!(
            "Q-table is {}x{} but environment is {}x{}",
            q.n_states(),
            q.n_actions(),
            env.n_states(),
            env.n_actions()
        )));
    }

    env.begin_run(scales);
    let mut actions = Vec::with_capacity(duration.div_ceil(scales.t_a));
    let mut in_force = 0;
    let mut window = (0, 0);
    let mut observations = 0;
    let mut updates = 0;

    for tick in 0..duration {
        if tick % scales.t_a == 0 {
            let state = env.observe();
            let chosen = select_action(q, state, params.epsilon, rng)?;
            in_force = env.actuate(chosen);
            actions.push(ActionRecord {
                tick,
                state,
                action: in_force,
            });
        }
        if tick % scales.t_l == 0 {
            window = (env.observe(), in_force);
        }

        env.advance(rng)?;
        observations += 1;

        if (tick + 1) % scales.t_l == 0 {
            let reward = env.window_reward();
            let next = env.observe();
            q_update(q, window.0, window.1, reward, next, params)?;
            updates += 1;
        }
    }

    Ok(MultisampleRun {
        performance: env.end_run()?,
        actions,
        observations,
        updates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    use crate::SimRng;

    /// Two states, two actions; the reward is a constant.
    struct Constant {
        state: usize,
        reward: f64,
        advances: usize,
    }

    impl Environment<f64> for Constant {
        fn n_states(&self) -> usize {
            2
        }
        fn n_actions(&self) -> usize {
            2
        }
        fn observe(&self) -> usize {
            self.state
        }
        fn actuate(&mut self, action: usize) -> usize {
            action
        }
        fn advance<R: Rng + ?Sized>(&mut self, _rng: &mut R) -> Result<()> {
            self.advances += 1;
            Ok(())
        }
        fn window_reward(&mut self) -> f64 {
            self.reward
        }
        fn end_run(&mut self) -> Result<f64> {
            Ok(self.reward)
        }
    }

    fn env() -> Constant {
        Constant {
            state: 0,
            reward: 1.0,
            advances: 0,
        }
    }

    #[test]
    fn counting_contract() {
        let mut e = env();
        let mut q = QTable::new(2, 2).unwrap();
        let scales = TimeScales::new(1.0, 2, 4).unwrap();
        let mut rng = SimRng::seed_from_u64(3);
        let run = multisample_run(&mut e, &mut q, &scales, &Default::default(), 8, &mut rng).unwrap();
        assert_eq!(run.observations, 8);
        assert_eq!(run.actuations(), 4);
        assert_eq!(run.updates, 2);
        assert_eq!(e.advances, 8);
    }

    #[test]
    fn duration_must_be_multiple_of_evaluation_period() {
        let mut e = env();
        let mut q = QTable::new(2, 2).unwrap();
        let scales = TimeScales::new(1.0, 2, 4).unwrap();
        let mut rng = SimRng::seed_from_u64(3);
        assert!(multisample_run(&mut e, &mut q, &scales, &Default::default(), 6, &mut rng).is_err());
    }

    #[test]
    fn converges_to_bellman_fixed_point() {
        let mut e = env();
        let mut q = QTable::new(2, 2).unwrap();
        let params = LearningParams {
            epsilon: 0.0,
            epsilon_floor: 0.0,
            ..Default::default()
        };
        let scales = TimeScales::new(1.0, 1, 1).unwrap();
        let mut rng = SimRng::seed_from_u64(3);
        multisample_run(&mut e, &mut q, &scales, &params, 200, &mut rng).unwrap();
        let fixed_point = 1.0 / (1.0 - params.gamma);
        assert!((q.get(0, 0).unwrap() - fixed_point).abs() < 1e-9);
    }

    #[test]
    fn deterministic_per_seed() {
        let scales = TimeScales::new(1.0, 3, 6).unwrap();
        let params = LearningParams {
            epsilon: 0.5,
            ..Default::default()
        };
        let run = |seed| {
            let mut e = env();
            let mut q = QTable::new(2, 2).unwrap();
            let mut rng = SimRng::seed_from_u64(seed);
            let r = multisample_run(&mut e, &mut q, &scales, &params, 60, &mut rng).unwrap();
            (r.actions, q)
        };
        assert_eq!(run(11), run(11));
    }
}
