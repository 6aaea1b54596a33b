use rand::SeedableRng;

use crate::experiments::report::{modal, tail_window};
use crate::experiments::{derive_seed, governor_oracle, App, GovernorReport, HumanPlant, PerformanceMap, SwitchReport};
use crate::governor::{GovernorAgent, GovernorGrid, GovernorState};
use crate::metrics::ComfortConfig;
use crate::rl::LearningParams;
use crate::{Error, Result, SimRng};

/// Shared knobs of the governor experiments.
#[derive(Debug, Clone)]
pub struct GovernorSetup {
    pub params: LearningParams<f64>,
    pub comfort: ComfortConfig<f64>,
    pub iterations: usize,
    pub oracle_warmup: usize,
    pub oracle_samples: usize,
    /// Share of final iterations the modal state is taken over.
    pub modal_fraction: f64,
    pub adaptive_epsilon: bool,
    pub fcw_grid: GovernorGrid,
    pub hvac_grid: GovernorGrid,
}

impl Default for GovernorSetup {
    fn default() -> Self {
        Self {
            params: LearningParams::default(),
            comfort: ComfortConfig::default(),
            iterations: 3000,
            oracle_warmup: 2,
            oracle_samples: 3,
            modal_fraction: 0.1,
            adaptive_epsilon: true,
            fcw_grid: GovernorGrid::fcw(),
            hvac_grid: GovernorGrid::hvac(),
        }
    }
}

impl GovernorSetup {
    pub fn grid(&self, app: App) -> &GovernorGrid {
        match app {
            App::Fcw => &self.fcw_grid,
            App::Hvac => &self.hvac_grid,
        }
    }
}

fn indices(grid: &GovernorGrid, states: &[GovernorState]) -> Vec<usize> {
    states
        .iter()
        .map(|&s| grid.index_of(s).expect("governor stays on its grid"))
        .collect()
}

/// Brute-force map of one human's governor grid.
pub fn plant_oracle(plant: &HumanPlant, setup: &GovernorSetup, seed: u64) -> Result<PerformanceMap> {
    let env_seed = derive_seed(seed, 1);
    governor_oracle(
        setup.grid(plant.app()),
        plant.sample_period(),
        |_| plant.system(&setup.params, setup.comfort, env_seed),
        setup.oracle_warmup,
        setup.oracle_samples,
        derive_seed(seed, 2),
    )
    .map_err(|e| Error::Human {
        human: plant.id().into(),
        source: Box::new(e),
    })
}

fn agent(plant: &HumanPlant, setup: &GovernorSetup) -> Result<GovernorAgent<f64>> {
    Ok(
        GovernorAgent::new(setup.grid(plant.app()).clone(), setup.params, plant.reward_variant(), plant.sample_period())?
            .with_adaptive_epsilon(setup.adaptive_epsilon),
    )
}

fn human_base(seed: u64, i: usize) -> u64 {
    derive_seed(seed, 100 + i as u64)
}

fn switch_base(seed: u64) -> u64 {
    derive_seed(seed, 200)
}

/// The oracle maps [`run_inter_human`] computes, without the governor runs.
pub fn inter_human_oracles(plants: &[HumanPlant], setup: &GovernorSetup, seed: u64) -> Result<Vec<PerformanceMap>> {
    plants
        .iter()
        .enumerate()
        .map(|(i, p)| plant_oracle(p, setup, derive_seed(human_base(seed, i), 0)))
        .collect()
}

/// The two oracle maps [`run_intra_switch`] computes.
pub fn switch_oracles(
    from: &HumanPlant,
    to: &HumanPlant,
    setup: &GovernorSetup,
    seed: u64,
) -> Result<(PerformanceMap, PerformanceMap)> {
    let base = switch_base(seed);
    Ok((
        plant_oracle(from, setup, derive_seed(base, 0))?,
        plant_oracle(to, setup, derive_seed(base, 1))?,
    ))
}

/// For every human: the oracle map, then a governor run from scratch, scored by the
/// oracle value of its modal state.
pub fn run_inter_human(plants: &[HumanPlant], setup: &GovernorSetup, seed: u64) -> Result<Vec<GovernorReport>> {
    if setup.iterations == 0 {
        return Err(Error::Config("governor needs at least one iteration".into()));
    }
    let mut out = Vec::with_capacity(plants.len());
    for (i, plant) in plants.iter().enumerate() {
        let base = human_base(seed, i);
        let oracle = plant_oracle(plant, setup, derive_seed(base, 0))?;
        let grid = setup.grid(plant.app());
        let mut system = plant.system(&setup.params, setup.comfort, derive_seed(base, 1))?;
        let mut rng = SimRng::seed_from_u64(derive_seed(base, 2));
        let mut gov = agent(plant, setup)?;
        let (states, records) = gov
            .run(&mut system, 0, setup.iterations, &mut rng)
            .map_err(|e| Error::Human {
                human: plant.id().into(),
                source: Box::new(e),
            })?;
        let trace = indices(grid, &states);
        let window = tail_window(trace.len(), setup.modal_fraction);
        let m = modal(&trace, window, oracle.len());
        out.push(GovernorReport {
            human: plant.id().into(),
            app: plant.app(),
            iterations: setup.iterations,
            modal_window: window,
            modal_state: oracle.labels[m].clone(),
            modal_performance: oracle.values[m],
            modal_rank: oracle.rank(m),
            relative_gap: oracle.relative_gap(m),
            oracle_best: oracle.labels[oracle.argmax()].clone(),
            oracle,
            state_trace: trace,
            records,
        });
    }
    Ok(out)
}

/// Governor run on `from` that switches to `to` at `switch_iteration`, keeping all
/// learned tables.
pub fn run_intra_switch(
    from: &HumanPlant,
    to: &HumanPlant,
    setup: &GovernorSetup,
    switch_iteration: usize,
    recovery_tolerance: f64,
    seed: u64,
) -> Result<SwitchReport> {
    if switch_iteration == 0 || switch_iteration >= setup.iterations {
        return Err(Error::Config(format!(
            "switch iteration {switch_iteration} must lie inside 1..{}",
            setup.iterations
        )));
    }
    if from.app() != to.app() {
        return Err(Error::Config("switch must stay within one application".into()));
    }
    let base = switch_base(seed);
    let (oracle_from, oracle_to) = switch_oracles(from, to, setup, seed)?;
    let grid = setup.grid(from.app());
    let mut system = from.system(&setup.params, setup.comfort, derive_seed(base, 2))?;
    let mut rng = SimRng::seed_from_u64(derive_seed(base, 3));
    let mut gov = agent(from, setup)?;
    let (mut states, mut records) = gov.run(&mut system, 0, switch_iteration, &mut rng)?;
    system.set_human(to)?;
    let (s2, r2) = gov.run(&mut system, switch_iteration, setup.iterations - switch_iteration, &mut rng)?;
    states.extend(s2);
    records.extend(r2);

    let trace = indices(grid, &states);
    let window = tail_window(trace.len(), setup.modal_fraction);
    let pre = modal(&trace[..switch_iteration], window, grid.states().len());
    let post = modal(&trace, window, grid.states().len());

    // Last end point whose trailing modal state misses the tolerance.
    let mut last_miss = None;
    for end in (switch_iteration + 1)..=trace.len() {
        let w = window.min(end - switch_iteration);
        let m = modal(&trace[end - w..end], w, grid.states().len());
        if oracle_to.relative_gap(m) > recovery_tolerance {
            last_miss = Some(end);
        }
    }
    let recovery_iterations = match last_miss {
        Some(end) if end == trace.len() => None,
        Some(end) => Some(end + 1 - switch_iteration),
        None => Some(1),
    };

    Ok(SwitchReport {
        from: from.id().into(),
        to: to.id().into(),
        app: from.app(),
        iterations: setup.iterations,
        switch_iteration,
        modal_window: window,
        pre_modal_state: oracle_from.labels[pre].clone(),
        pre_relative_gap: oracle_from.relative_gap(pre),
        post_modal_state: oracle_to.labels[post].clone(),
        post_relative_gap: oracle_to.relative_gap(post),
        recovery_iterations,
        recovery_tolerance,
        oracle_from,
        oracle_to,
        state_trace: trace,
        records,
    })
}
