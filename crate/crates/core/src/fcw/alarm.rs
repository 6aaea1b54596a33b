use serde::{Deserialize, Serialize};

use crate::fcw::VehiclePairState;
use crate::scalar::{lit, Scalar};
use crate::{Error, Result};

/// Gap below which the ego car is considered too close, m.
pub const SAFETY_GAP: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ttc<T> {
    /// Gap closed: the cars touched.
    Collision,
    Closing(T),
    /// Not closing, no finite time to collision.
    Opening,
}

impl<T: Scalar> Ttc<T> {
    pub fn seconds(self) -> Option<T> {
        match self {
            Ttc::Collision => Some(T::zero()),
            Ttc::Closing(t) => Some(t),
            Ttc::Opening => None,
        }
    }
}

pub fn time_to_collision<T: Scalar>(state: &VehiclePairState<T>) -> Ttc<T> {
    let gap = state.gap();
    if gap <= T::zero() {
        return Ttc::Collision;
    }
    let closing = state.closing_speed();
    if closing > T::zero() {
        Ttc::Closing(gap / closing)
    } else {
        Ttc::Opening
    }
}

/// Candidate time-to-collision thresholds and the one in force.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlarmPolicy<T> {
    pub thresholds: Vec<T>,
    pub current: usize,
}

impl<T: Scalar> Default for AlarmPolicy<T> {
    fn default() -> Self {
        Self {
            thresholds: [1.0, 1.5, 2.0, 2.5, 3.0].iter().map(|&t| lit(t)).collect(),
            current: 2,
        }
    }
}

impl<T: Scalar> AlarmPolicy<T> {
    pub fn new(thresholds: Vec<T>, current: usize) -> Result<Self> {
        if thresholds.is_empty() || thresholds.iter().any(|t| !(*t > T::zero())) {
            return Err(Error::Config("alarm thresholds must be positive".into()));
        }
        if current >= thresholds.len() {
            return Err(Error::IndexOutOfRange {
                what: "alarm threshold",
                index: current,
                len: thresholds.len(),
            });
        }
        Ok(Self { thresholds, current })
    }

    pub fn threshold(&self) -> T {
        self.thresholds[self.current]
    }
}

/// Alarm iff a time to collision exists and is strictly below the threshold.
pub fn alarm_decision<T: Scalar>(ttc: Option<T>, threshold: T) -> bool {
    matches!(ttc, Some(t) if t < threshold)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Label {
    Tp,
    Fp,
    Tn,
    Fn,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Tp => "TP",
            Label::Fp => "FP",
            Label::Tn => "TN",
            Label::Fn => "FN",
        }
    }
}

/// What happened during one evaluation window.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WindowSummary {
    pub alarm: bool,
    /// The gap fell below the safety distance.
    pub dipped: bool,
    /// The driver braked in response to an alarm.
    pub responded: bool,
}

impl WindowSummary {
    pub fn absorb(&mut self, alarm: bool, dipped: bool, responded: bool) {
        self.alarm |= alarm;
        self.dipped |= dipped;
        self.responded |= responded;
    }
}

/// A needed alarm that was heeded is a TP; an alarm on a window that never got close
/// is an FP; getting close without a heeded alarm is an FN.
pub fn classify_window(w: &WindowSummary) -> Label {
    match (w.alarm, w.dipped) {
        (true, true) if w.responded => Label::Tp,
        (true, true) => Label::Fn,
        (true, false) => Label::Fp,
        (false, true) => Label::Fn,
        (false, false) => Label::Tn,
    }
}
