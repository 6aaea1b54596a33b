//! Top-level agent that mixes the actions of several humans sharing one environment
//! and, optionally, rewards itself for treating them evenly.

mod agent;
mod fairness;
mod mediation;
mod weights;

pub use agent::{run_mediator, MediatorRecord, MediatorRun, WEIGHT_STEP};
pub use fairness::{
    coefficient_of_variation, fairness_reward, mediator_reward, update_utilities, FairnessParams, UtilityTracker,
};
pub use mediation::{calculate_state_performance, mediate_actuation_rates, round_half_up, wavg, HumanStacks, StatePerformance};
pub use weights::{enumerate_weight_states, WeightState};
