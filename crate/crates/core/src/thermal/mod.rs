//! Single-zone house heated by a thermostat-controlled furnace, with occupants whose
//! activity follows a daily schedule.

mod climate;
mod house;
mod occupants;

pub use climate::{outdoor_temperature, OutdoorClimate};
pub use house::{c_to_f, f_to_c, step_house, thermostat_command, HouseParams, ThermalState, THERMOSTAT_BAND_C};
pub use occupants::{occupant_heat_flow, sample_activity, Activity, OccupantProfile, EBT_DEFAULT, HEAT_PER_RMV_EBT};
