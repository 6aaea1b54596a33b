use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        Self { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

impl AddAssign for ConfusionCounts {
    fn add_assign(&mut self, o: Self) {
        self.tp += o.tp;
        self.fp += o.fp;
        self.tn += o.tn;
        self.fn_ += o.fn_;
    }
}

/// Accuracy and Matthews correlation coefficient. MCC is 0 when any marginal is empty.
pub fn accuracy_mcc<T: Scalar>(c: &ConfusionCounts) -> Result<(T, T)> {
    let total = c.total();
    if total == 0 {
        return Err(Error::EmptyCounts);
    }
    let f = |x: u64| x as f64;
    let acc = f(c.tp + c.tn) / f(total);
    let denom = f(c.tp + c.fp) * f(c.tp + c.fn_) * f(c.tn + c.fp) * f(c.tn + c.fn_);
    let mcc = if denom == 0.0 {
        0.0
    } else {
        ((f(c.tp) * f(c.tn) - f(c.fp) * f(c.fn_)) / denom.sqrt()).clamp(-1.0, 1.0)
    };
    Ok((T::from_f64(acc).expect("finite"), T::from_f64(mcc).expect("finite")))
}

/// `(Acc + (MCC + 1) / 2) / 2`, i.e. `Acc + MCC` mapped onto [0, 1].
pub fn fcw_performance<T: Scalar>(c: &ConfusionCounts) -> Result<T> {
    let (acc, mcc) = accuracy_mcc::<T>(c)?;
    let two = T::one() + T::one();
    Ok((acc + (mcc + T::one()) / two) / two)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(accuracy_mcc::<f64>(&ConfusionCounts::new(50, 0, 50, 0)).unwrap(), (1.0, 1.0));
        assert_eq!(accuracy_mcc::<f64>(&ConfusionCounts::new(0, 50, 0, 50)).unwrap(), (0.0, -1.0));
        let c = ConfusionCounts::new(40, 10, 30, 20);
        let (acc, mcc) = accuracy_mcc::<f64>(&c).unwrap();
        assert!((acc - 0.7).abs() < 1e-12);
        // (1200 - 200) / sqrt(50 * 60 * 40 * 50)
        let oracle = 1000.0 / (50.0_f64 * 60.0 * 40.0 * 50.0).sqrt();
        assert!((mcc - oracle).abs() < 1e-12);
        assert!((mcc - 0.40825).abs() < 1e-5);
        let p = fcw_performance::<f64>(&c).unwrap();
        assert!((p - 0.70206).abs() < 1e-5);
        assert_eq!(fcw_performance::<f64>(&ConfusionCounts::new(50, 0, 50, 0)).unwrap(), 1.0);
        assert_eq!(fcw_performance::<f64>(&ConfusionCounts::new(0, 50, 0, 50)).unwrap(), 0.0);
        assert!((fcw_performance::<f32>(&c).unwrap() - 0.70206).abs() < 1e-5);
    }

    #[test]
    fn degenerate() {
        assert!(matches!(accuracy_mcc::<f64>(&ConfusionCounts::default()), Err(Error::EmptyCounts)));
        assert_eq!(accuracy_mcc::<f64>(&ConfusionCounts::new(0, 0, 10, 0)).unwrap(), (1.0, 0.0));
    }

    proptest! {
        #[test]
        fn mcc_symmetries(tp in 0u64..100, fp in 0u64..100, tn in 0u64..100, fn_ in 0u64..100) {
            prop_assume!(tp + fp + tn + fn_ > 0);
            let (_, m) = accuracy_mcc::<f64>(&ConfusionCounts::new(tp, fp, tn, fn_)).unwrap();
            let (_, swapped) = accuracy_mcc::<f64>(&ConfusionCounts::new(tn, fn_, tp, fp)).unwrap();
            let (_, negated) = accuracy_mcc::<f64>(&ConfusionCounts::new(fp, tp, fn_, tn)).unwrap();
            prop_assert!((m - swapped).abs() < 1e-12);
            prop_assert!((m + negated).abs() < 1e-12);
            let p = fcw_performance::<f64>(&ConfusionCounts::new(tp, fp, tn, fn_)).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}
