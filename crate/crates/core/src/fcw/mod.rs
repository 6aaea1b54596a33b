//! Two-car longitudinal simulator: a scripted lead car, an ego car driven by a
//! parameterized human and a time-to-collision alarm.

mod alarm;
mod driver;
mod lead;
mod vehicle;

pub use alarm::{alarm_decision, classify_window, time_to_collision, AlarmPolicy, Label, Ttc, WindowSummary, SAFETY_GAP};
pub use driver::{driver_step, DriverCommand, DriverProfile, DriverState};
pub use lead::{LeadPhase, LeadScript};
pub use vehicle::{step_vehicle, Vehicle, VehicleParams, VehiclePairState, GRAVITY};
