use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{to_f64, Scalar};
use crate::{Error, Result};

/// Per-human weights on a `1/denominator` grid, stored as integer grid units so the
/// components always sum to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightState {
    parts: Vec<u32>,
    denominator: u32,
}

impl WeightState {
    pub fn new(parts: Vec<u32>, denominator: u32) -> Result<Self> {
        if parts.is_empty() || denominator == 0 {
            return Err(Error::Config("weight state needs humans and a positive denominator".into()));
        }
        if parts.iter().sum::<u32>() != denominator {
            return Err(Error::Config(format!(
                "weight parts {parts:?} do not sum to {denominator}"
            )));
        }
        Ok(Self { parts, denominator })
    }

    pub fn n_humans(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    pub fn weights<T: Scalar>(&self) -> Vec<T> {
        let d = T::from_u32(self.denominator).expect("denominator fits");
        self.parts
            .iter()
            .map(|&p| T::from_u32(p).expect("part fits") / d)
            .collect()
    }
}

impl fmt::Display for WeightState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights::<f64>().iter().map(|w| format!("{w}")).collect();
        write!(f, "({})", ws.join(","))
    }
}

/// All compositions of one into `n` parts on a grid of spacing `step`, in
/// lexicographic order of the parts.
pub fn enumerate_weight_states<T: Scalar>(n: usize, step: T) -> Result<Vec<WeightState>> {
    if n == 0 {
        return Err(Error::Config("mediator needs at least one human".into()));
    }
    let inv = to_f64(step).recip();
    let denominator = inv.round();
    if !(step > T::zero()) || (inv - denominator).abs() > 1e-6 || denominator < 1.0 {
        return Err(Error::Config(format!("1/step must be a positive integer, step = {step}")));
    }
    let denominator = denominator as u32;
    let mut out = Vec::new();
    let mut parts = vec![0u32; n];
    compose(&mut parts, 0, denominator, denominator, &mut out);
    Ok(out)
}

fn compose(parts: &mut Vec<u32>, i: usize, left: u32, denominator: u32, out: &mut Vec<WeightState>) {
    if i + 1 == parts.len() {
        parts[i] = left;
        out.push(WeightState {
            parts: parts.clone(),
            denominator,
        });
        return;
    }
    for k in 0..=left {
        parts[i] = k;
        compose(parts, i + 1, left - k, denominator, out);
    }
}
