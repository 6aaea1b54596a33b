use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::experiments::{GovernorSetup, HumanPlant, MediatorSetup};
use crate::fcw::DriverProfile;
use crate::governor::GovernorGrid;
use crate::metrics::ComfortConfig;
use crate::rl::LearningParams;
use crate::thermal::OccupantProfile;
use crate::{Error, Result};

/// One run. Every key except `scenario` and `seed` has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    pub seed: u64,
    #[serde(default = "d::out_dir")]
    pub out_dir: PathBuf,

    #[serde(default = "d::fcw_iterations")]
    pub fcw_iterations: usize,
    #[serde(default = "d::hvac_iterations")]
    pub hvac_iterations: usize,
    #[serde(default = "d::mediator_iterations")]
    pub mediator_iterations: usize,
    /// Iteration of the profile switch; half of `fcw_iterations` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switch_iteration: Option<usize>,
    #[serde(default = "d::switch_pairs")]
    pub switch_pairs: Vec<[String; 2]>,
    #[serde(default = "d::tolerance")]
    pub recovery_tolerance: f64,

    #[serde(default = "d::oracle_samples")]
    pub oracle_samples: usize,
    #[serde(default = "d::oracle_warmup")]
    pub oracle_warmup: usize,
    #[serde(default = "d::modal_fraction")]
    pub modal_fraction: f64,

    #[serde(default = "d::fcw_t_l")]
    pub fcw_t_l: Vec<usize>,
    #[serde(default = "d::fcw_t_a")]
    pub fcw_t_a: Vec<usize>,
    #[serde(default = "d::hvac_t_l")]
    pub hvac_t_l: Vec<usize>,
    #[serde(default = "d::hvac_t_a")]
    pub hvac_t_a: Vec<usize>,

    #[serde(default = "d::drivers")]
    pub drivers: Vec<String>,
    /// Occupants tuned one at a time by a governor.
    #[serde(default = "d::governed")]
    pub governed_occupants: Vec<String>,
    /// Occupants sharing the mediated house.
    #[serde(default = "d::household")]
    pub household: Vec<String>,

    #[serde(default = "d::alpha")]
    pub alpha: f64,
    #[serde(default = "d::gamma")]
    pub gamma: f64,
    #[serde(default = "d::epsilon")]
    pub epsilon: f64,
    #[serde(default = "d::epsilon_floor")]
    pub epsilon_floor: f64,
    #[serde(default = "d::stagnation_window")]
    pub stagnation_window: usize,
    #[serde(default = "d::yes")]
    pub adaptive_epsilon: bool,

    /// Fairness weight of the fairness-aware runs; the plain runs use 0.
    #[serde(default = "d::zeta")]
    pub zeta: f64,
    #[serde(default = "d::theta1")]
    pub theta1: f64,
    #[serde(default = "d::theta2")]
    pub theta2: f64,
    #[serde(default = "d::comfort_window")]
    pub comfort_window: usize,
    #[serde(default = "d::pretrain_days")]
    pub pretrain_days: usize,
    #[serde(default = "d::fixed_setpoints")]
    pub fixed_setpoints: Vec<f64>,
    /// Final share of the house samples the comfort comparison is measured over.
    #[serde(default = "d::measure_fraction")]
    pub measure_fraction: f64,
}

mod d {
    use std::path::PathBuf;

    fn h(ids: &[&str]) -> Vec<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    pub fn out_dir() -> PathBuf {
        "runs".into()
    }
    pub fn fcw_iterations() -> usize {
        3000
    }
    pub fn hvac_iterations() -> usize {
        2000
    }
    pub fn mediator_iterations() -> usize {
        1500
    }
    pub fn switch_pairs() -> Vec<[String; 2]> {
        vec![["H1".into(), "H2".into()], ["H1".into(), "H3".into()]]
    }
    pub fn tolerance() -> f64 {
        0.1
    }
    pub fn oracle_samples() -> usize {
        3
    }
    pub fn oracle_warmup() -> usize {
        2
    }
    pub fn modal_fraction() -> f64 {
        0.1
    }
    pub fn fcw_t_l() -> Vec<usize> {
        vec![80, 90, 100, 110]
    }
    pub fn fcw_t_a() -> Vec<usize> {
        (8..=15).collect()
    }
    pub fn hvac_t_l() -> Vec<usize> {
        vec![10, 15, 20, 30]
    }
    pub fn hvac_t_a() -> Vec<usize> {
        (1..=8).map(|k| 2 * k).collect()
    }
    pub fn drivers() -> Vec<String> {
        h(&["H1", "H2", "H3"])
    }
    pub fn governed() -> Vec<String> {
        h(&["H1", "H2"])
    }
    pub fn household() -> Vec<String> {
        h(&["H1", "H2", "H3"])
    }
    pub fn alpha() -> f64 {
        0.9
    }
    pub fn gamma() -> f64 {
        0.1
    }
    pub fn epsilon() -> f64 {
        0.2
    }
    pub fn epsilon_floor() -> f64 {
        0.01
    }
    pub fn stagnation_window() -> usize {
        50
    }
    pub fn yes() -> bool {
        true
    }
    pub fn zeta() -> f64 {
        0.5
    }
    pub fn theta1() -> f64 {
        0.7
    }
    pub fn theta2() -> f64 {
        0.3
    }
    pub fn comfort_window() -> usize {
        240
    }
    pub fn pretrain_days() -> usize {
        30
    }
    pub fn fixed_setpoints() -> Vec<f64> {
        vec![70.0, 76.0]
    }
    pub fn measure_fraction() -> f64 {
        0.25
    }
}

/// Every key a config file may contain.
pub const CONFIG_KEYS: &[&str] = &[
    "scenario",
    "seed",
    "out_dir",
    "fcw_iterations",
    "hvac_iterations",
    "mediator_iterations",
    "switch_iteration",
    "switch_pairs",
    "recovery_tolerance",
    "oracle_samples",
    "oracle_warmup",
    "modal_fraction",
    "fcw_t_l",
    "fcw_t_a",
    "hvac_t_l",
    "hvac_t_a",
    "drivers",
    "governed_occupants",
    "household",
    "alpha",
    "gamma",
    "epsilon",
    "epsilon_floor",
    "stagnation_window",
    "adaptive_epsilon",
    "zeta",
    "theta1",
    "theta2",
    "comfort_window",
    "pretrain_days",
    "fixed_setpoints",
    "measure_fraction",
];

fn line_of(text: &str, err: &toml::de::Error) -> usize {
    err.span()
        .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
        .unwrap_or(1)
}

fn parse_error(text: &str, err: toml::de::Error) -> Error {
    Error::Parse {
        line: line_of(text, &err),
        message: err.message().trim().to_string(),
    }
}

impl RunConfig {
    /// Defaults for everything but the scenario and the seed.
    pub fn new(scenario: &str, seed: u64) -> Self {
        Self::parse(&format!("scenario = {scenario:?}\nseed = {seed}\n")).expect("defaults are valid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e| parse_error(text, e))?;
        if let Some(k) = table.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
            return Err(Error::UnknownKey(k.clone()));
        }
        let cfg: Self = toml::from_str(text).map_err(|e| parse_error(text, e))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.learning_params()?;
        self.comfort()?;
        self.fcw_grid()?;
        self.hvac_grid()?;
        self.drivers()?;
        self.governed_occupants()?;
        self.household_profiles()?;
        for pair in &self.switch_pairs {
            for id in pair {
                driver(id)?;
            }
        }
        for (what, v) in [
            ("fcw_iterations", self.fcw_iterations),
            ("hvac_iterations", self.hvac_iterations),
            ("mediator_iterations", self.mediator_iterations),
            ("oracle_samples", self.oracle_samples),
        ] {
            if v == 0 {
                return Err(Error::Config(format!("{what} must be positive")));
            }
        }
        let switch = self.switch_iteration();
        if switch == 0 || switch >= self.fcw_iterations {
            return Err(Error::Config(format!(
                "switch_iteration {switch} must lie inside 1..{}",
                self.fcw_iterations
            )));
        }
        for (what, v) in [
            ("zeta", self.zeta),
            ("modal_fraction", self.modal_fraction),
            ("measure_fraction", self.measure_fraction),
            ("recovery_tolerance", self.recovery_tolerance),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::range(what, v, 0.0, 1.0));
            }
        }
        if self.modal_fraction == 0.0 || self.measure_fraction == 0.0 {
            return Err(Error::Config("modal and measure fractions must be positive".into()));
        }
        if self.fixed_setpoints.is_empty() {
            return Err(Error::Config("fixed_setpoints must not be empty".into()));
        }
        if let Some(sp) = self.fixed_setpoints.iter().find(|s| !(60.0..=85.0).contains(*s)) {
            return Err(Error::range("fixed set-point", *sp, 60.0, 85.0));
        }
        Ok(())
    }

    pub fn switch_iteration(&self) -> usize {
        self.switch_iteration.unwrap_or(self.fcw_iterations / 2)
    }

    pub fn learning_params(&self) -> Result<LearningParams<f64>> {
        let p = LearningParams {
            alpha: self.alpha,
            gamma: self.gamma,
            epsilon: self.epsilon,
            epsilon_floor: self.epsilon_floor,
            stagnation_window: self.stagnation_window,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn comfort(&self) -> Result<ComfortConfig<f64>> {
        ComfortConfig::new(self.theta1, self.theta2, self.comfort_window)
    }

    pub fn fcw_grid(&self) -> Result<GovernorGrid> {
        GovernorGrid::new(self.fcw_t_l.clone(), self.fcw_t_a.clone())
    }

    pub fn hvac_grid(&self) -> Result<GovernorGrid> {
        GovernorGrid::new(self.hvac_t_l.clone(), self.hvac_t_a.clone())
    }

    pub fn drivers(&self) -> Result<Vec<HumanPlant>> {
        self.drivers.iter().map(|id| driver(id)).collect()
    }

    pub fn governed_occupants(&self) -> Result<Vec<HumanPlant>> {
        self.governed_occupants
            .iter()
            .map(|id| occupant(id).map(HumanPlant::Occupant))
            .collect()
    }

    pub fn household_profiles(&self) -> Result<Vec<OccupantProfile<f64>>> {
        if self.household.len() < 2 {
            return Err(Error::Config("household needs at least two occupants".into()));
        }
        self.household.iter().map(|id| occupant(id)).collect()
    }

    pub fn governor_setup(&self, iterations: usize) -> Result<GovernorSetup> {
        Ok(GovernorSetup {
            params: self.learning_params()?,
            comfort: self.comfort()?,
            iterations,
            oracle_warmup: self.oracle_warmup,
            oracle_samples: self.oracle_samples,
            modal_fraction: self.modal_fraction,
            adaptive_epsilon: self.adaptive_epsilon,
            fcw_grid: self.fcw_grid()?,
            hvac_grid: self.hvac_grid()?,
        })
    }

    pub fn mediator_setup(&self) -> Result<MediatorSetup> {
        let mut s = MediatorSetup {
            iterations: self.mediator_iterations,
            pretrain_days: self.pretrain_days,
            oracle_warmup: self.oracle_warmup,
            oracle_samples: self.oracle_samples,
            modal_fraction: self.modal_fraction,
            ..Default::default()
        };
        s.household.params = self.learning_params()?;
        s.household.comfort = self.comfort()?;
        s.household.grid = self.hvac_grid()?;
        Ok(s)
    }
}

pub fn driver(id: &str) -> Result<HumanPlant> {
    DriverProfile::standard(id)
        .map(HumanPlant::Driver)
        .ok_or_else(|| Error::Config(format!("unknown driver profile {id:?}")))
}

pub fn occupant(id: &str) -> Result<OccupantProfile<f64>> {
    OccupantProfile::standard(id).ok_or_else(|| Error::Config(format!("unknown occupant profile {id:?}")))
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    RunConfig::parse(&text)
}
