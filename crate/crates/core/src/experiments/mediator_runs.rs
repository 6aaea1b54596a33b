use std::collections::BTreeSet;

use rand::SeedableRng;

use crate::apps::{HouseLogRow, HouseSim, Household, HouseholdConfig};
use crate::experiments::report::{modal, tail_window};
use crate::experiments::{
    brute_force_performance_map, derive_seed, ComfortReport, ComfortSeries, ComfortStats, MediatorReport,
    PerformanceMap,
};
use crate::mediator::{
    calculate_state_performance, enumerate_weight_states, run_mediator, FairnessParams, HumanStacks, WEIGHT_STEP,
};
use crate::metrics::{discomfort, ComfortConfig};
use crate::thermal::{Activity, OccupantProfile};
use crate::{Error, Result, SimRng};

/// Knobs shared by the household experiments.
#[derive(Debug, Clone)]
pub struct MediatorSetup {
    pub household: HouseholdConfig<f64>,
    pub iterations: usize,
    /// Days each thermostat learner trains alone before joining the household.
    pub pretrain_days: usize,
    pub oracle_warmup: usize,
    pub oracle_samples: usize,
    pub modal_fraction: f64,
}

impl Default for MediatorSetup {
    fn default() -> Self {
        Self {
            household: HouseholdConfig::default(),
            iterations: 1500,
            pretrain_days: 30,
            oracle_warmup: 2,
            oracle_samples: 3,
            modal_fraction: 0.1,
        }
    }
}

impl MediatorSetup {
    /// House samples consumed by a full run: two evaluation periods per iteration.
    pub fn total_samples(&self) -> usize {
        2 * self.iterations * self.household.period
    }
}

fn house_seed(seed: u64) -> u64 {
    derive_seed(seed, 301)
}

/// The household every mediator run and oracle starts from. Depends on the seed only,
/// so runs with different zeta share it.
pub fn pretrained_household(profiles: &[OccupantProfile<f64>], setup: &MediatorSetup, seed: u64) -> Result<Household<f64>> {
    if profiles.len() < 2 {
        return Err(Error::Config("mediation needs at least two occupants".into()));
    }
    let mut rng = SimRng::seed_from_u64(derive_seed(seed, 300));
    Household::pretrained(
        profiles.to_vec(),
        setup.household.clone(),
        setup.pretrain_days,
        house_seed(seed),
        &mut rng,
    )
}

/// Brute-force map over the weight states: every state drives a copy of the
/// household for `warmup + samples` periods.
pub fn weight_oracle(base: &Household<f64>, setup: &MediatorSetup, seed: u64) -> Result<PerformanceMap> {
    let states = enumerate_weight_states(base.n_humans(), WEIGHT_STEP)?;
    brute_force_performance_map(
        &states,
        |w| w.to_string(),
        |_| Ok(base.clone()),
        |h, w, rng| Ok(calculate_state_performance::<f64, _, _>(w, h, rng)?.performance),
        setup.oracle_warmup,
        setup.oracle_samples,
        derive_seed(seed, 302),
    )
}

/// Full three-level run on the shared house. Returns the report and the household in
/// its final state, so callers can read the house log.
pub fn run_mediator_experiment(
    profiles: &[OccupantProfile<f64>],
    setup: &MediatorSetup,
    zeta: f64,
    with_oracle: bool,
    log_from: Option<usize>,
    seed: u64,
) -> Result<(MediatorReport, Household<f64>)> {
    if setup.iterations == 0 {
        return Err(Error::Config("mediator needs at least one iteration".into()));
    }
    let fairness = FairnessParams::new(zeta)?;
    let mut household = pretrained_household(profiles, setup, seed)?;
    let oracle = if with_oracle {
        Some(weight_oracle(&household, setup, seed)?)
    } else {
        None
    };
    if let Some(start) = log_from {
        household.house.enable_log_from(start);
    }
    let mut rng = SimRng::seed_from_u64(derive_seed(seed, 303));
    let run = run_mediator(
        &mut household,
        &setup.household.params,
        &fairness,
        setup.iterations,
        None,
        &mut rng,
    )?;

    let n = run.weight_trace.len();
    let window = tail_window(n, setup.modal_fraction);
    let m = modal(&run.weight_trace, window, run.states.len());
    let quarter = tail_window(n, 0.25);
    let distinct: BTreeSet<usize> = run.weight_trace[n - quarter..].iter().copied().collect();
    let tail = &run.performance_trace[n - quarter..];
    let report = MediatorReport {
        zeta,
        iterations: setup.iterations,
        humans: profiles.iter().map(|p| p.id.clone()).collect(),
        oracle,
        modal_window: window,
        modal_state: run.states[m].to_string(),
        modal_index: m,
        final_cv: run.final_cv(),
        final_utilities: run.utilities.clone(),
        distinct_final_quarter: distinct.len(),
        mean_performance: tail.iter().sum::<f64>() / tail.len() as f64,
        records: run.records,
    };
    Ok((report, household))
}

fn present(row: &HouseLogRow, human: usize) -> bool {
    row.activities[human] != Activity::NotHome.label()
}

/// Comfort statistics of a logged run, over samples where each human is at home.
pub fn comfort_stats(label: &str, rows: &[HouseLogRow], comfort: &ComfortConfig<f64>) -> Result<ComfortStats> {
    let n = rows.first().map_or(0, |r| r.pmv.len());
    if n == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut per_d = Vec::with_capacity(n);
    let mut per_band = Vec::with_capacity(n);
    for h in 0..n {
        let home: Vec<f64> = rows.iter().filter(|r| present(r, h)).map(|r| r.pmv[h]).collect();
        per_d.push(discomfort(&home, comfort)?);
        per_band.push(home.iter().filter(|p| p.abs() <= 1.0).count() as f64 / home.len() as f64);
    }
    Ok(ComfortStats {
        label: label.into(),
        discomfort: per_d.iter().sum::<f64>() / n as f64,
        per_human_discomfort: per_d,
        per_human_in_band: per_band,
    })
}

/// Trailing one-day moving average of every human's PMV (away samples count as
/// neutral), taken every `stride` samples.
pub fn comfort_series(label: &str, rows: &[HouseLogRow], day: usize, stride: usize) -> ComfortSeries {
    let n = rows.first().map_or(0, |r| r.pmv.len());
    let mut sums = vec![0.0; n];
    let mut ma = vec![Vec::new(); n];
    let mut setpoint = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        for (h, sum) in sums.iter_mut().enumerate() {
            *sum += r.pmv[h];
            if i >= day {
                *sum -= rows[i - day].pmv[h];
            }
        }
        if (i + 1) % stride == 0 {
            let k = (i + 1).min(day) as f64;
            for h in 0..n {
                ma[h].push(sums[h] / k);
            }
            setpoint.push(r.setpoint);
        }
    }
    ComfortSeries {
        label: label.into(),
        stride,
        moving_average: ma,
        setpoint,
    }
}

/// Logged tail of a house held at one set-point for `total` samples.
pub fn fixed_setpoint_log(
    profiles: &[OccupantProfile<f64>],
    setpoint_f: f64,
    total: usize,
    log_from: usize,
    seed: u64,
) -> Result<Vec<HouseLogRow>> {
    let mut house = HouseSim::new(profiles.to_vec(), house_seed(seed))?;
    house.set_setpoint(setpoint_f);
    house.enable_log_from(log_from);
    for _ in 0..total {
        house.sample()?;
    }
    Ok(house.take_log())
}

/// The adaptive stack against fixed set-points on the same house seed, compared over
/// the final `measure_fraction` of samples.
pub fn run_fixed_vs_adaptive(
    profiles: &[OccupantProfile<f64>],
    fixed_setpoints: &[f64],
    setup: &MediatorSetup,
    zeta: f64,
    measure_fraction: f64,
    seed: u64,
) -> Result<(ComfortReport, MediatorReport)> {
    if fixed_setpoints.is_empty() {
        return Err(Error::Config("need at least one fixed set-point".into()));
    }
    if !(measure_fraction > 0.0 && measure_fraction <= 1.0) {
        return Err(Error::OutOfRange {
            what: "measure fraction",
            value: measure_fraction,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let total = setup.total_samples();
    let measured = tail_window(total, measure_fraction);
    let start = total - measured;
    let comfort = &setup.household.comfort;
    let day = setup.household.period;
    let stride = (day / 10).max(1);

    let (med, mut household) = run_mediator_experiment(profiles, setup, zeta, false, Some(start), seed)?;
    let rows = household.house.take_log();
    if rows.len() != measured {
        return Err(Error::InsufficientData {
            needed: measured,
            got: rows.len(),
        });
    }
    let adaptive = comfort_stats("adaptive", &rows, comfort)?;
    let mut series = vec![comfort_series("adaptive", &rows, day, stride)];

    let mut fixed = Vec::with_capacity(fixed_setpoints.len());
    for &sp in fixed_setpoints {
        let label = format!("fixed-{sp}F");
        let rows = fixed_setpoint_log(profiles, sp, total, start, seed)?;
        fixed.push(comfort_stats(&label, &rows, comfort)?);
        series.push(comfort_series(&label, &rows, day, stride));
    }
    let best = (0..fixed.len())
        .min_by(|&a, &b| fixed[a].discomfort.total_cmp(&fixed[b].discomfort))
        .expect("nonempty");
    let base = fixed[best].discomfort;
    let improvement = if base > 0.0 {
        (base - adaptive.discomfort) / base
    } else {
        0.0
    };
    Ok((
        ComfortReport {
            humans: profiles.iter().map(|p| p.id.clone()).collect(),
            measured_samples: measured,
            best_fixed: fixed[best].label.clone(),
            adaptive,
            fixed,
            improvement,
            series,
        },
        med,
    ))
}
