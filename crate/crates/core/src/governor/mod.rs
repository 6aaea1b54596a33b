//! Outer agent that tunes the (evaluation, actuation) periods of a Multisample learner.

mod agent;
mod grid;
mod reward;

pub use agent::{run_governor, GovernorAgent, GovernorRecord, GovernorRun, TunableSystem};
pub use grid::{apply_governor_action, enumerate_governor_states, GovernorAction, GovernorGrid, GovernorState, Step};
pub use reward::{governor_reward, step_weight, RewardVariant};
