use rand::Rng;
use serde::Serialize;

use crate::apps::{FcwSystem, HvacSystem, FCW_SAMPLE_PERIOD, HVAC_SAMPLE_PERIOD};
use crate::fcw::DriverProfile;
use crate::governor::{GovernorGrid, RewardVariant, TunableSystem};
use crate::metrics::ComfortConfig;
use crate::rl::{LearningParams, TimeScales};
use crate::thermal::OccupantProfile;
use crate::Result;

/// Which application a human is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum App {
    Fcw,
    Hvac,
}

/// A human together with the application they use.
#[derive(Debug, Clone, PartialEq)]
pub enum HumanPlant {
    Driver(DriverProfile<f64>),
    Occupant(OccupantProfile<f64>),
}

impl HumanPlant {
    pub fn id(&self) -> &str {
        match self {
            HumanPlant::Driver(d) => &d.id,
            HumanPlant::Occupant(o) => &o.id,
        }
    }

    pub fn app(&self) -> App {
        match self {
            HumanPlant::Driver(_) => App::Fcw,
            HumanPlant::Occupant(_) => App::Hvac,
        }
    }

    pub fn grid(&self) -> GovernorGrid {
        match self.app() {
            App::Fcw => GovernorGrid::fcw(),
            App::Hvac => GovernorGrid::hvac(),
        }
    }

    pub fn sample_period(&self) -> f64 {
        match self.app() {
            App::Fcw => FCW_SAMPLE_PERIOD,
            App::Hvac => HVAC_SAMPLE_PERIOD,
        }
    }

    /// The HVAC reward scales the step by the new performance.
    pub fn reward_variant(&self) -> RewardVariant {
        match self.app() {
            App::Fcw => RewardVariant::Generic,
            App::Hvac => RewardVariant::SignedStep,
        }
    }

    pub fn system(&self, params: &LearningParams<f64>, comfort: ComfortConfig<f64>, seed: u64) -> Result<PlantSystem> {
        Ok(match self {
            HumanPlant::Driver(d) => PlantSystem::Fcw(FcwSystem::new(d.clone(), *params, seed)?),
            HumanPlant::Occupant(o) => PlantSystem::Hvac(HvacSystem::new(o.clone(), *params, comfort, seed)?),
        })
    }
}

/// A tunable inner learner for either application.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum PlantSystem {
    Fcw(FcwSystem<f64>),
    Hvac(HvacSystem<f64>),
}

impl PlantSystem {
    /// Swaps the human while keeping the learner and the physical state.
    pub fn set_human(&mut self, human: &HumanPlant) -> Result<()> {
        match (self, human) {
            (PlantSystem::Fcw(s), HumanPlant::Driver(d)) => s.env.set_driver(d.clone()),
            (PlantSystem::Hvac(s), HumanPlant::Occupant(o)) => s.env.house.set_profile(0, o.clone()),
            _ => Err(crate::Error::Config("cannot switch a human across applications".into())),
        }
    }
}

impl TunableSystem<f64> for PlantSystem {
    fn evaluate<R: Rng + ?Sized>(&mut self, scales: &TimeScales, rng: &mut R) -> Result<f64> {
        match self {
            PlantSystem::Fcw(s) => s.evaluate(scales, rng),
            PlantSystem::Hvac(s) => s.evaluate(scales, rng),
        }
    }
}
