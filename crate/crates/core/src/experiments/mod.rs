//! Scenario drivers for the six experiments and the brute-force oracles their
//! convergence claims are checked against.

mod governor_runs;
mod mediator_runs;
mod oracle;
mod plant;
mod report;

pub use governor_runs::{
    inter_human_oracles, plant_oracle, run_inter_human, run_intra_switch, switch_oracles, GovernorSetup,
};
pub use mediator_runs::{
    comfort_series, comfort_stats, fixed_setpoint_log, pretrained_household, run_fixed_vs_adaptive,
    run_mediator_experiment, weight_oracle, MediatorSetup,
};
pub use oracle::{brute_force_performance_map, derive_seed, governor_oracle, PerformanceMap};
pub use plant::{App, HumanPlant, PlantSystem};
pub use report::{
    modal, tail_window, ComfortReport, ComfortSeries, ComfortStats, ExperimentReport, GovernorReport,
    MediatorReport, SwitchReport,
};
