use rand::Rng;
use serde::Serialize;

use crate::governor::{
    apply_governor_action, governor_reward, GovernorAction, GovernorGrid, GovernorState, RewardVariant,
};
use crate::rl::{epsilon_schedule, q_update, select_action, LearningParams, QTable, TimeScales};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Anything whose performance in [0, 1] can be measured for given time scales,
/// typically a Multisample learner bound to its environment.
pub trait TunableSystem<T: Scalar> {
    fn evaluate<R: Rng + ?Sized>(&mut self, scales: &TimeScales, rng: &mut R) -> Result<T>;
}

impl<T: Scalar, S: TunableSystem<T> + ?Sized> TunableSystem<T> for &mut S {
    fn evaluate<R: Rng + ?Sized>(&mut self, scales: &TimeScales, rng: &mut R) -> Result<T> {
        (**self).evaluate(scales, rng)
    }
}

/// One GovQL iteration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GovernorRecord<T> {
    pub iteration: usize,
    pub t_l: usize,
    pub t_a: usize,
    pub p_s: T,
    pub next_t_l: usize,
    pub next_t_a: usize,
    pub p_next: T,
    pub reward: T,
    pub epsilon: T,
}

#[derive(Debug, Clone)]
pub struct GovernorRun<T> {
    pub q: QTable<T>,
    /// State at the start of every iteration.
    pub states: Vec<GovernorState>,
    pub records: Vec<GovernorRecord<T>>,
}

#[derive(Debug, Clone)]
pub struct GovernorAgent<T> {
    grid: GovernorGrid,
    states: Vec<GovernorState>,
    q: QTable<T>,
    params: LearningParams<T>,
    variant: RewardVariant,
    t_s: f64,
    epsilon: T,
    adaptive_epsilon: bool,
    rewards: Vec<T>,
    state: GovernorState,
}

impl<T: Scalar> GovernorAgent<T> {
    pub fn new(
        grid: GovernorGrid,
        params: LearningParams<T>,
        variant: RewardVariant,
        t_s: f64,
    ) -> Result<Self> {
        params.validate()?;
        let states = grid.states();
        let q = QTable::new(states.len(), GovernorAction::ALL.len())?;
        Ok(Self {
            state: states[0],
            epsilon: params.epsilon,
            grid,
            states,
            q,
            params,
            variant,
            t_s,
            adaptive_epsilon: false,
            rewards: Vec::new(),
        })
    }

    pub fn with_initial_state(mut self, s: GovernorState) -> Result<Self> {
        self.set_state(s)?;
        Ok(self)
    }

    /// Halve epsilon whenever the reward stagnates.
    pub fn with_adaptive_epsilon(mut self, on: bool) -> Self {
        self.adaptive_epsilon = on;
        self
    }

    pub fn grid(&self) -> &GovernorGrid {
        &self.grid
    }

    pub fn q(&self) -> &QTable<T> {
        &self.q
    }

    pub fn state(&self) -> GovernorState {
        self.state
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn scales(&self) -> TimeScales {
        self.grid.scales(self.state, self.t_s)
    }

    /// Overrides the current state, e.g. when a mediator echoes back a different
    /// actuation period.
    pub fn set_state(&mut self, s: GovernorState) -> Result<()> {
        if !self.grid.is_valid(s) {
            return Err(Error::Config(format!("{s:?} is not a governor grid state")));
        }
        self.state = s;
        Ok(())
    }

    fn state_index(&self, s: GovernorState) -> usize {
        self.states
            .iter()
            .position(|&x| x == s)
            .expect("state validated on entry")
    }

    /// Epsilon-greedy choice from the current state; returns the action index and the
    /// state it leads to. The agent does not move until [`learn`](Self::learn).
    pub fn choose<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(usize, GovernorState)> {
        let a = select_action(&self.q, self.state_index(self.state), self.epsilon, rng)?;
        Ok((a, apply_governor_action(&self.grid, self.state, GovernorAction::ALL[a])))
    }

    /// Credits the transition `from --action--> to`, moves to `to` and returns the reward.
    pub fn learn(
        &mut self,
        from: GovernorState,
        action: usize,
        to: GovernorState,
        p_prev: T,
        p_next: T,
    ) -> Result<T> {
        if !self.grid.is_valid(from) || !self.grid.is_valid(to) {
            return Err(Error::Config("transition leaves the governor grid".into()));
        }
        let reward = governor_reward(p_prev, p_next, self.variant)?;
        let (s, s_next) = (self.state_index(from), self.state_index(to));
        q_update(&mut self.q, s, action, reward, s_next, &self.params)?;
        self.rewards.push(reward);
        if self.adaptive_epsilon {
            self.epsilon = epsilon_schedule(self.epsilon, &self.rewards, &self.params);
        }
        self.state = to;
        Ok(reward)
    }

    /// One GovQL iteration: measure the current state, act, measure the next state,
    /// learn from the performance change.
    pub fn step<S, R>(&mut self, system: &mut S, iteration: usize, rng: &mut R) -> Result<GovernorRecord<T>>
    where
        S: TunableSystem<T> + ?Sized,
        R: Rng + ?Sized,
    {
        let from = self.state;
        let p_s = system.evaluate(&self.grid.scales(from, self.t_s), rng)?;
        let (action, to) = self.choose(rng)?;
        let p_next = system.evaluate(&self.grid.scales(to, self.t_s), rng)?;
        let reward = self.learn(from, action, to, p_s, p_next)?;
        let (t_l, t_a) = self.grid.periods(from);
        let (next_t_l, next_t_a) = self.grid.periods(to);
        Ok(GovernorRecord {
            iteration,
            t_l,
            t_a,
            p_s,
            next_t_l,
            next_t_a,
            p_next,
            reward,
            epsilon: self.epsilon,
        })
    }

    /// Runs `iterations` steps, numbering them from `first_iteration`.
    pub fn run<S, R>(
        &mut self,
        system: &mut S,
        first_iteration: usize,
        iterations: usize,
        rng: &mut R,
    ) -> Result<(Vec<GovernorState>, Vec<GovernorRecord<T>>)>
    where
        S: TunableSystem<T> + ?Sized,
        R: Rng + ?Sized,
    {
        let mut states = Vec::with_capacity(iterations);
        let mut records = Vec::with_capacity(iterations);
        for i in first_iteration..first_iteration + iterations {
            states.push(self.state);
            let rec = self.step(system, i, rng).map_err(|e| Error::Governor {
                iteration: i,
                source: Box::new(e),
            })?;
            records.push(rec);
        }
        Ok((states, records))
    }
}

/// GovQL from the first grid state with fixed epsilon.
pub fn run_governor<T, S, R>(
    system: &mut S,
    grid: &GovernorGrid,
    params: &LearningParams<T>,
    variant: RewardVariant,
    t_s: f64,
    iterations: usize,
    rng: &mut R,
) -> Result<GovernorRun<T>>
where
    T: Scalar,
    S: TunableSystem<T> + ?Sized,
    R: Rng + ?Sized,
{
    if iterations == 0 {
        return Err(Error::Config("governor needs at least one iteration".into()));
    }
    let mut agent = GovernorAgent::new(grid.clone(), *params, variant, t_s)?;
    let (states, records) = agent.run(system, 0, iterations, rng)?;
    Ok(GovernorRun {
        q: agent.q,
        states,
        records,
    })
}
