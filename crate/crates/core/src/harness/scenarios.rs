use crate::apps::FcwSystem;
use crate::experiments::{
    inter_human_oracles, pretrained_household, run_fixed_vs_adaptive, run_inter_human, run_intra_switch,
    run_mediator_experiment, switch_oracles, weight_oracle, ExperimentReport, GovernorReport, HumanPlant,
    MediatorReport, PerformanceMap, SwitchReport,
};
use crate::governor::{GovernorRecord, TunableSystem};
use crate::harness::config::{driver, RunConfig};
use crate::harness::output::CsvTable;
use crate::{Error, Result, SimRng};

/// Scenario names accepted by [`run_scenario`].
pub const SCENARIOS: &[(&str, &str)] = &[
    ("exp1", "governor convergence for three FCW drivers"),
    ("exp2", "governor adaptation after an FCW driver switch"),
    ("exp3", "governor convergence for two HVAC occupants"),
    ("exp4", "mediator convergence without fairness (zeta = 0)"),
    ("exp5", "mediator with fairness against zeta = 0 on the same seed"),
    ("exp6", "mediated set-points against fixed set-points"),
];

/// `all` runs every scenario above.
pub const ALL: &str = "all";

pub fn scenario_names() -> Vec<&'static str> {
    SCENARIOS.iter().map(|s| s.0).chain([ALL]).collect()
}

pub fn check_scenario(name: &str) -> Result<()> {
    if scenario_names().contains(&name) {
        Ok(())
    } else {
        Err(Error::UnknownScenario {
            name: name.into(),
            valid: scenario_names().join(", "),
        })
    }
}

/// A finished scenario: the summary plus the tables written next to it.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub report: ExperimentReport,
    pub tables: Vec<CsvTable>,
}

fn governor_table(name: String, records: &[GovernorRecord<f64>]) -> CsvTable {
    let mut t = CsvTable::new(
        name,
        &["iteration", "t_l", "t_a", "p_s", "next_t_l", "next_t_a", "p_next", "reward", "epsilon"],
    );
    for r in records {
        t.push(vec![
            r.iteration.to_string(),
            r.t_l.to_string(),
            r.t_a.to_string(),
            r.p_s.to_string(),
            r.next_t_l.to_string(),
            r.next_t_a.to_string(),
            r.p_next.to_string(),
            r.reward.to_string(),
            r.epsilon.to_string(),
        ]);
    }
    t
}

fn oracle_table(name: String, map: &PerformanceMap) -> CsvTable {
    let mut t = CsvTable::new(name, &["state", "performance", "rank"]);
    for (i, (label, v)) in map.labels.iter().zip(&map.values).enumerate() {
        t.push(vec![label.clone(), v.to_string(), map.rank(i).to_string()]);
    }
    t
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

fn mediator_table(name: String, m: &MediatorReport, labels: &[String]) -> CsvTable {
    let mut t = CsvTable::new(
        name,
        &[
            "iteration",
            "state",
            "weights",
            "a_t",
            "p_s",
            "next_state",
            "p_next",
            "cv",
            "reward",
            "zeta",
            "experiences",
        ],
    );
    for r in &m.records {
        t.push(vec![
            r.iteration.to_string(),
            labels[r.state].clone(),
            join(&r.weights),
            r.a_t.to_string(),
            r.p_s.to_string(),
            labels[r.next_state].clone(),
            r.p_next.to_string(),
            r.cv.map(|c| c.to_string()).unwrap_or_default(),
            r.reward.to_string(),
            r.zeta.to_string(),
            join(&r.experiences),
        ]);
    }
    t
}

fn weight_labels(n: usize) -> Result<Vec<String>> {
    Ok(crate::mediator::enumerate_weight_states(n, crate::mediator::WEIGHT_STEP)?
        .iter()
        .map(|w| w.to_string())
        .collect())
}

fn zeta_tag(z: f64) -> String {
    format!("zeta{z}")
}

/// One drive at the governor's modal periods, for inspection.
fn drive_table(report: &GovernorReport, plant: &HumanPlant, cfg: &RunConfig) -> Result<Option<CsvTable>> {
    let HumanPlant::Driver(d) = plant else {
        return Ok(None);
    };
    let setup = cfg.governor_setup(cfg.fcw_iterations)?;
    let grid = setup.grid(plant.app());
    let Some(state) = grid.states().into_iter().find(|s| grid.label(*s) == report.modal_state) else {
        return Ok(None);
    };
    let mut sys = FcwSystem::new(d.clone(), setup.params, cfg.seed)?;
    sys.env.enable_log();
    let mut rng = <SimRng as rand::SeedableRng>::seed_from_u64(cfg.seed);
    sys.evaluate(&grid.scales(state, plant.sample_period()), &mut rng)?;
    let mut t = CsvTable::new(
        format!("drive_{}.csv", report.human),
        &[
            "clock",
            "ego_position",
            "ego_velocity",
            "lead_position",
            "lead_velocity",
            "gap",
            "ttc",
            "alarm",
            "pedal",
            "label",
        ],
    );
    for r in sys.env.take_log() {
        t.push(vec![
            r.clock.to_string(),
            r.ego_position.to_string(),
            r.ego_velocity.to_string(),
            r.lead_position.to_string(),
            r.lead_velocity.to_string(),
            r.gap.to_string(),
            r.ttc.map(|v| v.to_string()).unwrap_or_default(),
            u8::from(r.alarm).to_string(),
            r.pedal.to_string(),
            r.label.unwrap_or("").to_string(),
        ]);
    }
    Ok(Some(t))
}

fn governor_scenario(cfg: &RunConfig, plants: &[HumanPlant], iterations: usize, out: &mut ScenarioOutput) -> Result<()> {
    let reports = run_inter_human(plants, &cfg.governor_setup(iterations)?, cfg.seed)?;
    for (g, plant) in reports.iter().zip(plants) {
        let app = serde_json::to_value(g.app)?.as_str().unwrap_or("").to_string();
        out.tables.push(governor_table(format!("governor_{app}_{}.csv", g.human), &g.records));
        out.tables.push(oracle_table(format!("oracle_{app}_{}.csv", g.human), &g.oracle));
        if let Some(t) = drive_table(g, plant, cfg)? {
            out.tables.push(t);
        }
    }
    out.report.governors = reports;
    Ok(())
}

fn switch_scenario(cfg: &RunConfig, out: &mut ScenarioOutput) -> Result<()> {
    let setup = cfg.governor_setup(cfg.fcw_iterations)?;
    let mut reports: Vec<SwitchReport> = Vec::new();
    for [a, b] in &cfg.switch_pairs {
        let r = run_intra_switch(
            &driver(a)?,
            &driver(b)?,
            &setup,
            cfg.switch_iteration(),
            cfg.recovery_tolerance,
            cfg.seed,
        )?;
        out.tables.push(governor_table(format!("switch_{a}_{b}.csv"), &r.records));
        out.tables.push(oracle_table(format!("oracle_{a}_{b}_before.csv"), &r.oracle_from));
        out.tables.push(oracle_table(format!("oracle_{a}_{b}_after.csv"), &r.oracle_to));
        reports.push(r);
    }
    out.report.switches = reports;
    Ok(())
}

fn mediator_scenario(cfg: &RunConfig, zetas: &[f64], out: &mut ScenarioOutput) -> Result<()> {
    let profiles = cfg.household_profiles()?;
    let setup = cfg.mediator_setup()?;
    let labels = weight_labels(profiles.len())?;
    for (i, &z) in zetas.iter().enumerate() {
        let (m, _) = run_mediator_experiment(&profiles, &setup, z, i == 0, None, cfg.seed)?;
        out.tables.push(mediator_table(format!("mediator_{}.csv", zeta_tag(z)), &m, &labels));
        if let Some(o) = &m.oracle {
            out.tables.push(oracle_table("oracle_weights.csv".into(), o));
        }
        out.report.mediators.push(m);
    }
    Ok(())
}

fn comfort_scenario(cfg: &RunConfig, out: &mut ScenarioOutput) -> Result<()> {
    let profiles = cfg.household_profiles()?;
    let setup = cfg.mediator_setup()?;
    let (c, m) = run_fixed_vs_adaptive(
        &profiles,
        &cfg.fixed_setpoints,
        &setup,
        cfg.zeta,
        cfg.measure_fraction,
        cfg.seed,
    )?;
    let labels = weight_labels(profiles.len())?;
    out.tables.push(mediator_table(format!("mediator_{}.csv", zeta_tag(cfg.zeta)), &m, &labels));
    let mut header = vec!["scenario".to_string(), "point".into(), "sample".into(), "setpoint".into()];
    header.extend(c.humans.iter().map(|h| format!("pmv_ma_{h}")));
    let mut t = CsvTable::with_header("comfort_series.csv".into(), header);
    for s in &c.series {
        for (k, sp) in s.setpoint.iter().enumerate() {
            let mut row = vec![s.label.clone(), k.to_string(), ((k + 1) * s.stride).to_string(), sp.to_string()];
            row.extend(s.moving_average.iter().map(|ma| ma[k].to_string()));
            t.push(row);
        }
    }
    out.tables.push(t);
    let mut t = CsvTable::new("comfort_summary.csv".into(), &["scenario", "human", "discomfort", "in_band"]);
    for st in std::iter::once(&c.adaptive).chain(&c.fixed) {
        for (h, id) in c.humans.iter().enumerate() {
            t.push(vec![
                st.label.clone(),
                id.clone(),
                st.per_human_discomfort[h].to_string(),
                st.per_human_in_band[h].to_string(),
            ]);
        }
    }
    out.tables.push(t);
    out.report.mediators.push(m);
    out.report.comfort = Some(c);
    Ok(())
}

/// Runs one named scenario (not `all`).
pub fn run_scenario(cfg: &RunConfig, name: &str) -> Result<ScenarioOutput> {
    check_scenario(name)?;
    let mut out = ScenarioOutput {
        report: ExperimentReport::new(name, cfg.seed),
        tables: Vec::new(),
    };
    match name {
        "exp1" => governor_scenario(cfg, &cfg.drivers()?, cfg.fcw_iterations, &mut out)?,
        "exp2" => switch_scenario(cfg, &mut out)?,
        "exp3" => governor_scenario(cfg, &cfg.governed_occupants()?, cfg.hvac_iterations, &mut out)?,
        "exp4" => mediator_scenario(cfg, &[0.0], &mut out)?,
        "exp5" => mediator_scenario(cfg, &[0.0, cfg.zeta], &mut out)?,
        "exp6" => comfort_scenario(cfg, &mut out)?,
        _ => return Err(Error::Config(format!("{name} is not a single scenario"))),
    }
    Ok(out)
}

/// Brute-force maps of a scenario, identical to the ones its full run computes.
pub fn run_oracles(cfg: &RunConfig, name: &str) -> Result<ScenarioOutput> {
    check_scenario(name)?;
    let mut out = ScenarioOutput {
        report: ExperimentReport::new(name, cfg.seed),
        tables: Vec::new(),
    };
    let mut maps: Vec<(String, PerformanceMap)> = Vec::new();
    match name {
        "exp1" | "exp3" => {
            let (plants, iters, app) = if name == "exp1" {
                (cfg.drivers()?, cfg.fcw_iterations, "fcw")
            } else {
                (cfg.governed_occupants()?, cfg.hvac_iterations, "hvac")
            };
            let o = inter_human_oracles(&plants, &cfg.governor_setup(iters)?, cfg.seed)?;
            for (p, m) in plants.iter().zip(o) {
                maps.push((format!("oracle_{app}_{}.csv", p.id()), m));
            }
        }
        "exp2" => {
            let setup = cfg.governor_setup(cfg.fcw_iterations)?;
            for [a, b] in &cfg.switch_pairs {
                let (before, after) = switch_oracles(&driver(a)?, &driver(b)?, &setup, cfg.seed)?;
                maps.push((format!("oracle_{a}_{b}_before.csv"), before));
                maps.push((format!("oracle_{a}_{b}_after.csv"), after));
            }
        }
        "exp4" | "exp5" | "exp6" => {
            let setup = cfg.mediator_setup()?;
            let base = pretrained_household(&cfg.household_profiles()?, &setup, cfg.seed)?;
            maps.push(("oracle_weights.csv".into(), weight_oracle(&base, &setup, cfg.seed)?));
        }
        _ => return Err(Error::Config(format!("{name} is not a single scenario"))),
    }
    for (file, m) in maps {
        out.tables.push(oracle_table(file, &m));
    }
    Ok(out)
}
