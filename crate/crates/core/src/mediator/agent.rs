use rand::Rng;

use crate::mediator::{
    calculate_state_performance, enumerate_weight_states, mediator_reward, update_utilities, FairnessParams,
    HumanStacks, UtilityTracker, WeightState,
};
use crate::rl::{q_update, select_action, LearningParams, QTable};
use crate::scalar::{lit, Scalar};
use crate::{Error, Result};

/// One MedQL iteration. `weights`, `a_t` and `p_s` belong to the state the iteration
/// started in; `cv` is measured after both evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct MediatorRecord<T> {
    pub iteration: usize,
    pub state: usize,
    pub weights: Vec<f64>,
    pub a_t: T,
    pub p_s: T,
    pub next_state: usize,
    pub p_next: T,
    pub cv: Option<T>,
    pub reward: T,
    pub zeta: T,
    pub experiences: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct MediatorRun<T> {
    pub q: QTable<T>,
    pub states: Vec<WeightState>,
    /// State index at the start of every iteration.
    pub weight_trace: Vec<usize>,
    pub performance_trace: Vec<T>,
    pub cv_trace: Vec<Option<T>>,
    pub records: Vec<MediatorRecord<T>>,
    pub utilities: Vec<T>,
}

impl<T: Scalar> MediatorRun<T> {
    /// Most frequent state over the last `fraction` of iterations, ties to the lower index.
    pub fn modal_state(&self, fraction: f64) -> usize {
        let n = self.weight_trace.len();
        let k = ((n as f64 * fraction).ceil() as usize).clamp(1, n.max(1));
        let mut counts = vec![0usize; self.states.len()];
        for &s in &self.weight_trace[n.saturating_sub(k)..] {
            counts[s] += 1;
        }
        let mut best = 0;
        for (i, &c) in counts.iter().enumerate() {
            if c > counts[best] {
                best = i;
            }
        }
        best
    }

    pub fn final_cv(&self) -> Option<T> {
        self.cv_trace.iter().rev().find_map(|c| *c)
    }
}

/// Weight-grid spacing used by the mediator.
pub const WEIGHT_STEP: f64 = 0.2;

/// MedQL: tabular Q-learning over weight states, where every action jumps straight to a
/// state. Each iteration evaluates the current and the chosen state once.
pub fn run_mediator<T, S, R>(
    stacks: &mut S,
    params: &LearningParams<T>,
    fairness: &FairnessParams<T>,
    iterations: usize,
    initial_state: Option<usize>,
    rng: &mut R,
) -> Result<MediatorRun<T>>
where
    T: Scalar,
    S: HumanStacks<T> + ?Sized,
    R: Rng + ?Sized,
{
    params.validate()?;
    if iterations == 0 {
        return Err(Error::Config("mediator needs at least one iteration".into()));
    }
    let n = stacks.n_humans();
    let states = enumerate_weight_states(n, lit::<T>(WEIGHT_STEP))?;
    let mut q = QTable::new(states.len(), states.len())?;
    let mut s = match initial_state {
        Some(i) if i >= states.len() => {
            return Err(Error::IndexOutOfRange {
                what: "initial weight state",
                index: i,
                len: states.len(),
            })
        }
        Some(i) => i,
        None => {
            // Equal-as-possible weights.
            let target = states[0].denominator() as f64 / n as f64;
            (0..states.len())
                .min_by(|&a, &b| {
                    let d = |i: usize| states[i].parts().iter().map(|&p| (p as f64 - target).abs()).sum::<f64>();
                    d(a).partial_cmp(&d(b)).unwrap()
                })
                .unwrap()
        }
    };
    let mut tracker = UtilityTracker::<T>::new(n);
    let cv_of = |t: &UtilityTracker<T>| if n >= 2 { t.cv().ok() } else { None };
    let mut run = MediatorRun {
        q: QTable::new(1, 1)?,
        states: states.clone(),
        weight_trace: Vec::with_capacity(iterations),
        performance_trace: Vec::with_capacity(iterations),
        cv_trace: Vec::with_capacity(iterations),
        records: Vec::with_capacity(iterations),
        utilities: Vec::new(),
    };
    for iteration in 0..iterations {
        let wrap = |e| Error::Mediator {
            iteration,
            source: Box::new(e),
        };
        run.weight_trace.push(s);
        let here = calculate_state_performance(&states[s], stacks, rng).map_err(wrap)?;
        update_utilities(&mut tracker, &states[s]);
        let cv_prev = cv_of(&tracker);
        let a = select_action(&q, s, params.epsilon, rng).map_err(wrap)?;
        let next = calculate_state_performance(&states[a], stacks, rng).map_err(wrap)?;
        update_utilities(&mut tracker, &states[a]);
        let cv_next = cv_of(&tracker);
        let reward =
            mediator_reward(here.performance, next.performance, cv_prev, cv_next, fairness).map_err(wrap)?;
        q_update(&mut q, s, a, reward, a, params).map_err(wrap)?;
        run.performance_trace.push(here.performance);
        run.cv_trace.push(cv_next);
        run.records.push(MediatorRecord {
            iteration,
            state: s,
            weights: states[s].weights::<f64>(),
            a_t: here.mean_action,
            p_s: here.performance,
            next_state: a,
            p_next: next.performance,
            cv: cv_next,
            reward,
            zeta: fairness.zeta,
            experiences: here.experiences,
        });
        s = a;
    }
    run.q = q;
    run.utilities = tracker.utilities().to_vec();
    Ok(run)
}
