//! Tabular Q-learning shared by every agent in the stack, and the three-timescale
//! Multisample loop that drives an environment.

mod multisample;
mod params;
mod policy;
mod qtable;

pub use multisample::{multisample_run, ActionRecord, Environment, MultisampleRun};
pub use params::{LearningParams, TimeScales};
pub use policy::{epsilon_schedule, q_update, select_action};
pub use qtable::QTable;
