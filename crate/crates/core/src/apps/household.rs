use rand::Rng;

use crate::apps::hvac::{pretrain_learner, HouseSim, HVAC_SAMPLE_PERIOD, SETPOINTS_F};
use crate::governor::{GovernorAgent, GovernorGrid, GovernorState, RewardVariant};
use crate::mediator::{round_half_up, HumanStacks};
use crate::metrics::{goodness, ComfortConfig};
use crate::rl::{q_update, select_action, LearningParams, QTable};
use crate::scalar::{lit, Scalar};
use crate::thermal::OccupantProfile;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct HouseholdConfig<T> {
    pub params: LearningParams<T>,
    pub comfort: ComfortConfig<T>,
    pub grid: GovernorGrid,
    pub variant: RewardVariant,
    /// Samples per mediator evaluation.
    pub period: usize,
}

impl<T: Scalar> Default for HouseholdConfig<T> {
    fn default() -> Self {
        Self {
            params: LearningParams::default(),
            comfort: ComfortConfig::default(),
            grid: GovernorGrid::hvac(),
            variant: RewardVariant::SignedStep,
            period: 240,
        }
    }
}

#[derive(Debug, Clone)]
struct HumanStack<T> {
    q: QTable<T>,
    governor: GovernorAgent<T>,
    gov_from: GovernorState,
    gov_action: usize,
    active: GovernorState,
    in_force: usize,
    window_start: (usize, usize),
    window_ticks: usize,
    window_pmv: Vec<T>,
    period_pmv: Vec<T>,
    last_experience: Option<T>,
}

/// Several occupants sharing one house, each with a thermostat learner and a governor,
/// exposed to the mediator. Set-point proposals are mixed at every mediated actuation.
#[derive(Debug, Clone)]
pub struct Household<T> {
    pub house: HouseSim<T>,
    cfg: HouseholdConfig<T>,
    humans: Vec<HumanStack<T>>,
    setpoints: Vec<T>,
}

impl<T: Scalar> Household<T> {
    pub fn new(
        profiles: Vec<OccupantProfile<T>>,
        learners: Vec<QTable<T>>,
        cfg: HouseholdConfig<T>,
        seed: u64,
    ) -> Result<Self> {
        if profiles.len() != learners.len() || profiles.is_empty() {
            return Err(Error::Config("household needs one learner per occupant".into()));
        }
        cfg.params.validate()?;
        cfg.comfort.validate()?;
        if cfg.period == 0 {
            return Err(Error::Config("household period must be positive".into()));
        }
        let house = HouseSim::new(profiles, seed)?;
        let mut humans = Vec::with_capacity(learners.len());
        for q in learners {
            if q.n_states() != HouseSim::<T>::n_observations() || q.n_actions() != SETPOINTS_F.len() {
                return Err(Error::Config("learner table does not match the house".into()));
            }
            let governor = GovernorAgent::new(cfg.grid.clone(), cfg.params, cfg.variant, HVAC_SAMPLE_PERIOD)?;
            let s = governor.state();
            humans.push(HumanStack {
                q,
                governor,
                gov_from: s,
                gov_action: 0,
                active: s,
                in_force: 0,
                window_start: (0, 0),
                window_ticks: 0,
                window_pmv: Vec::new(),
                period_pmv: Vec::new(),
                last_experience: None,
            });
        }
        Ok(Self {
            house,
            cfg,
            humans,
            setpoints: SETPOINTS_F.iter().map(|&s| lit(s)).collect(),
        })
    }

    /// Builds a household whose learners were first trained alone for `days` days.
    pub fn pretrained<R: Rng + ?Sized>(
        profiles: Vec<OccupantProfile<T>>,
        cfg: HouseholdConfig<T>,
        days: usize,
        seed: u64,
        rng: &mut R,
    ) -> Result<Self> {
        let probe = GovernorAgent::<T>::new(cfg.grid.clone(), cfg.params, cfg.variant, HVAC_SAMPLE_PERIOD)?;
        let scales = probe.scales();
        let mut learners = Vec::with_capacity(profiles.len());
        for (i, p) in profiles.iter().enumerate() {
            let q = pretrain_learner(p.clone(), &cfg.params, cfg.comfort, &scales, days, seed ^ (0x9e37 + i as u64), rng)
                .map_err(|e| Error::Human {
                    human: p.id.clone(),
                    source: Box::new(e),
                })?;
            learners.push(q);
        }
        Self::new(profiles, learners, cfg, seed)
    }

    pub fn governor_state(&self, human: usize) -> GovernorState {
        self.humans[human].active
    }

    pub fn credited_action(&self, human: usize) -> usize {
        self.humans[human].in_force
    }

    pub fn setpoints(&self) -> &[T] {
        &self.setpoints
    }

    /// Index of the set-point closest to `value`, ties to the lower one.
    pub fn nearest_setpoint(&self, value: T) -> usize {
        let mut best = 0;
        for (i, &s) in self.setpoints.iter().enumerate() {
            if (s - value).abs() < (self.setpoints[best] - value).abs() {
                best = i;
            }
        }
        best
    }
}

impl<T: Scalar> HumanStacks<T> for Household<T> {
    fn n_humans(&self) -> usize {
        self.humans.len()
    }

    fn human_label(&self, human: usize) -> String {
        self.house.profile(human).id.clone()
    }

    fn period_ticks(&self) -> usize {
        self.cfg.period
    }

    fn begin_period<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        for h in self.humans.iter_mut() {
            let from = h.governor.state();
            let (action, to) = h.governor.choose(rng)?;
            h.gov_from = from;
            h.gov_action = action;
            h.active = to;
            h.window_ticks = 0;
            h.window_pmv.clear();
            h.period_pmv.clear();
        }
        Ok(())
    }

    fn proposal<R: Rng + ?Sized>(&mut self, human: usize, rng: &mut R) -> Result<(T, usize)> {
        let s = self.house.observe(human);
        let h = &self.humans[human];
        let a = select_action(&h.q, s, T::zero(), rng)?;
        Ok((self.setpoints[a], self.cfg.grid.periods(h.active).1))
    }

    fn quantize(&self, action: T) -> T {
        round_half_up(action)
    }

    fn echo(&mut self, action: T, rate: usize) -> Result<()> {
        let idx = self.nearest_setpoint(action);
        for h in self.humans.iter_mut() {
            let (t_l, _) = self.cfg.grid.periods(h.active);
            h.active = self
                .cfg
                .grid
                .find(t_l, rate)
                .ok_or_else(|| Error::Config(format!("mediated rate {rate} with t_l {t_l} is off the grid")))?;
            h.in_force = idx;
        }
        Ok(())
    }

    fn advance<R: Rng + ?Sized>(&mut self, action: T, ticks: usize, _rng: &mut R) -> Result<()> {
        self.house.set_setpoint(action);
        for _ in 0..ticks {
            for (i, h) in self.humans.iter_mut().enumerate() {
                if h.window_ticks == 0 {
                    h.window_start = (self.house.observe(i), h.in_force);
                }
            }
            let pmvs = self.house.sample()?;
            for (i, h) in self.humans.iter_mut().enumerate() {
                h.window_pmv.push(pmvs[i]);
                h.period_pmv.push(pmvs[i]);
                h.window_ticks += 1;
                if h.window_ticks >= self.cfg.grid.periods(h.active).0 {
                    let reward = goodness(&h.window_pmv, &self.cfg.comfort)?;
                    let next = self.house.observe(i);
                    q_update(&mut h.q, h.window_start.0, h.window_start.1, reward, next, &self.cfg.params)?;
                    h.window_ticks = 0;
                    h.window_pmv.clear();
                }
            }
        }
        Ok(())
    }

    fn experience(&mut self, human: usize) -> Result<T> {
        goodness(&self.humans[human].period_pmv, &self.cfg.comfort)
    }

    fn end_period(&mut self, experiences: &[T]) -> Result<()> {
        for (h, &e) in self.humans.iter_mut().zip(experiences) {
            match h.last_experience {
                Some(prev) => {
                    h.governor.learn(h.gov_from, h.gov_action, h.active, prev, e)?;
                }
                None => h.governor.set_state(h.active)?,
            }
            h.last_experience = Some(e);
        }
        Ok(())
    }
}
