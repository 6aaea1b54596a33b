//! Confusion-matrix scores for the collision warning and PMV comfort for the HVAC.

mod comfort;
mod confusion;
mod pmv;

pub use comfort::{discomfort, goodness, hvac_performance, ComfortConfig};
pub use confusion::{accuracy_mcc, fcw_performance, ConfusionCounts};
pub use pmv::{pmv, Humidity, PmvInputs, PMV_MAX_ITERATIONS};
