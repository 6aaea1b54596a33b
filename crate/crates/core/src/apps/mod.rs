//! Binds the simulators to the learners: Multisample environments, Governor-tunable
//! systems and the multi-occupant household driven by the Mediator.

mod fcw_env;
mod household;
mod hvac;

pub use fcw_env::{DriveLogRow, FcwEnv, FcwSystem, FCW_DRIVE_SECONDS, FCW_SAMPLE_PERIOD};
pub use household::{Household, HouseholdConfig};
pub use hvac::{
    pretrain_learner, HouseLogRow, HouseSim, HvacEnv, HvacSystem, HVAC_RUN_SAMPLES, HVAC_SAMPLE_PERIOD, SETPOINTS_F,
};
