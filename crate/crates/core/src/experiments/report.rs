use serde::Serialize;

use crate::experiments::{App, PerformanceMap};
use crate::governor::GovernorRecord;
use crate::mediator::MediatorRecord;

/// Most frequent value over the last `window` entries, ties to the lowest value.
pub fn modal(trace: &[usize], window: usize, n_states: usize) -> usize {
    let start = trace.len().saturating_sub(window.max(1));
    let mut counts = vec![0usize; n_states];
    for &s in &trace[start..] {
        counts[s] += 1;
    }
    (0..n_states).fold(0, |b, i| if counts[i] > counts[b] { i } else { b })
}

/// `ceil(fraction * len)`, at least 1.
pub fn tail_window(len: usize, fraction: f64) -> usize {
    ((len as f64 * fraction).ceil() as usize).max(1)
}

#[derive(Debug, Clone, Serialize)]
pub struct GovernorReport {
    pub human: String,
    pub app: App,
    pub iterations: usize,
    pub oracle: PerformanceMap,
    pub modal_window: usize,
    pub modal_state: String,
    pub modal_performance: f64,
    pub modal_rank: usize,
    /// `(oracle max - modal performance) / oracle max`.
    pub relative_gap: f64,
    pub oracle_best: String,
    #[serde(skip)]
    pub state_trace: Vec<usize>,
    #[serde(skip)]
    pub records: Vec<GovernorRecord<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SwitchReport {
    pub from: String,
    pub to: String,
    pub app: App,
    pub iterations: usize,
    pub switch_iteration: usize,
    pub oracle_from: PerformanceMap,
    pub oracle_to: PerformanceMap,
    pub modal_window: usize,
    pub pre_modal_state: String,
    pub pre_relative_gap: f64,
    pub post_modal_state: String,
    /// Gap of the final modal state against the new human's oracle.
    pub post_relative_gap: f64,
    /// Iterations after the switch until the trailing modal state first came within
    /// the tolerance of the new oracle and stayed there.
    pub recovery_iterations: Option<usize>,
    pub recovery_tolerance: f64,
    #[serde(skip)]
    pub state_trace: Vec<usize>,
    #[serde(skip)]
    pub records: Vec<GovernorRecord<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MediatorReport {
    pub zeta: f64,
    pub iterations: usize,
    pub humans: Vec<String>,
    pub oracle: Option<PerformanceMap>,
    pub modal_window: usize,
    pub modal_state: String,
    pub modal_index: usize,
    pub final_cv: Option<f64>,
    pub final_utilities: Vec<f64>,
    /// Distinct weight states visited in the final quarter of iterations.
    pub distinct_final_quarter: usize,
    pub mean_performance: f64,
    #[serde(skip)]
    pub records: Vec<MediatorRecord<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComfortStats {
    pub label: String,
    /// Mean over humans of `theta1 * mean|pmv| + theta2 * std(pmv)` while at home.
    pub discomfort: f64,
    pub per_human_discomfort: Vec<f64>,
    /// Share of at-home samples with PMV in [-1, 1].
    pub per_human_in_band: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComfortReport {
    pub humans: Vec<String>,
    pub measured_samples: usize,
    pub adaptive: ComfortStats,
    pub fixed: Vec<ComfortStats>,
    pub best_fixed: String,
    /// Relative discomfort reduction of the adaptive stack against the best fixed set-point.
    pub improvement: f64,
    #[serde(skip)]
    pub series: Vec<ComfortSeries>,
}

/// Per-human one-day moving average of PMV for one scenario, every `stride` samples.
#[derive(Debug, Clone)]
pub struct ComfortSeries {
    pub label: String,
    pub stride: usize,
    pub moving_average: Vec<Vec<f64>>,
    pub setpoint: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub scenario: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub governors: Vec<GovernorReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub switches: Vec<SwitchReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mediators: Vec<MediatorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comfort: Option<ComfortReport>,
}

impl ExperimentReport {
    pub fn new(scenario: &str, seed: u64) -> Self {
        Self {
            scenario: scenario.into(),
            seed,
            governors: Vec::new(),
            switches: Vec::new(),
            mediators: Vec::new(),
            comfort: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modal_ties_low() {
        assert_eq!(modal(&[3, 3, 1, 1, 2], 5, 4), 1);
        assert_eq!(modal(&[0, 0, 0, 2, 2], 2, 3), 2);
        assert_eq!(tail_window(3000, 0.1), 300);
        assert_eq!(tail_window(5, 0.1), 1);
    }
}
