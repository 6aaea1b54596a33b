//! Fairness-aware human-in-the-loop reinforcement learning.
//!
//! Three tabular agents are stacked on top of each other:
//!
//! * a *Multisample* learner ([`rl`]) that acts on a human-facing environment on
//!   three timescales (sampling, actuation, evaluation),
//! * a *Governor* ([`governor`]) that walks the (evaluation, actuation) period grid
//!   to maximize the measured performance of the learner underneath it,
//! * a *Mediator* ([`mediator`]) that mixes the actions of several humans sharing one
//!   environment and can trade performance for fairness.
//!
//! Two environments are provided: a forward-collision-warning car-following
//! simulator ([`fcw`]) and a heated house with PMV comfort ([`thermal`],
//! [`metrics::pmv`]). [`apps`] adapts them to the learners, [`experiments`] holds the
//! scenario drivers together with their brute-force oracles, and [`harness`] the
//! configuration and on-disk artifacts used by the `fair-hitl` binary.
//!
//! The numerical core is generic over the floating-point type ([`Scalar`]); the
//! aliases below pin the `f64` instantiation used by the experiment layer.

// `!(x >= lo && x <= hi)` is how range checks here also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod apps;
pub mod error;
pub mod experiments;
pub mod fcw;
pub mod governor;
pub mod harness;
pub mod mediator;
pub mod metrics;
pub mod rl;
pub mod scalar;
pub mod thermal;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Seeded random stream used throughout the crate.
pub type SimRng = rand_chacha::ChaCha8Rng;

pub type LearningParams = rl::LearningParams<f64>;
pub type QTable = rl::QTable<f64>;
pub type GovernorAgent = governor::GovernorAgent<f64>;
pub type UtilityTracker = mediator::UtilityTracker<f64>;
pub type ComfortConfig = metrics::ComfortConfig<f64>;
pub type PmvInputs = metrics::PmvInputs<f64>;
pub type HouseParams = thermal::HouseParams<f64>;
pub type ThermalState = thermal::ThermalState<f64>;
pub type VehicleParams = fcw::VehicleParams<f64>;
pub type VehiclePairState = fcw::VehiclePairState<f64>;
pub type DriverProfile = fcw::DriverProfile<f64>;

pub type LearningParamsF32 = rl::LearningParams<f32>;
pub type QTableF32 = rl::QTable<f32>;
pub type PmvInputsF32 = metrics::PmvInputs<f32>;
