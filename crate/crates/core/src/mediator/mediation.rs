use rand::Rng;

use crate::mediator::WeightState;
use crate::scalar::{lit, mean, to_f64, Scalar};
use crate::{Error, Result};

/// Weighted average `sum(w * a) / sum(w)`.
pub fn wavg<T: Scalar>(actions: &[T], weights: &[T]) -> Result<T> {
    if actions.len() != weights.len() || actions.is_empty() {
        return Err(Error::Config(format!(
            "wavg needs equal nonempty lengths, got {} actions and {} weights",
            actions.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| !(*w >= T::zero())) {
        return Err(Error::Config("wavg weights must be nonnegative".into()));
    }
    let total: T = weights.iter().copied().sum();
    if total == T::zero() {
        return Err(Error::UndefinedMediation);
    }
    let acc: T = actions.iter().zip(weights).map(|(&a, &w)| a * w).sum();
    Ok(acc / total)
}

/// Nearest whole number, halves rounded up. Values within 1e-9 of a half count as
/// the half, so `75.49999999999999` from float mixing still goes to 76.
pub fn round_half_up<T: Scalar>(x: T) -> T {
    let snapped = (x * lit(1e9)).round() / lit(1e9);
    (snapped + lit(0.5)).floor()
}

/// The fastest requested actuation rate wins.
pub fn mediate_actuation_rates(rates: &[usize]) -> Result<usize> {
    match rates.iter().copied().min() {
        None => Err(Error::Config("no actuation rates to mediate".into())),
        Some(0) => Err(Error::Config("actuation rates must be positive".into())),
        Some(r) => Ok(r),
    }
}

/// Per-human learner stacks sharing one environment, as seen by the mediator.
///
/// An evaluation period lasts [`period_ticks`](Self::period_ticks) ticks. Within it the
/// mediator repeatedly collects proposals, mixes them, echoes the result back and lets
/// the environment run at the mediated rate.
pub trait HumanStacks<T: Scalar> {
    fn n_humans(&self) -> usize;

    fn human_label(&self, human: usize) -> String {
        format!("H{}", human + 1)
    }

    fn period_ticks(&self) -> usize;

    fn begin_period<R: Rng + ?Sized>(&mut self, _rng: &mut R) -> Result<()> {
        Ok(())
    }

    /// Action and actuation rate currently preferred by `human`.
    fn proposal<R: Rng + ?Sized>(&mut self, human: usize, rng: &mut R) -> Result<(T, usize)>;

    /// Maps a mixed action onto what the actuator accepts.
    fn quantize(&self, action: T) -> T {
        action
    }

    /// Tells every learner which action was applied and every governor which rate.
    fn echo(&mut self, action: T, rate: usize) -> Result<()>;

    fn advance<R: Rng + ?Sized>(&mut self, action: T, ticks: usize, rng: &mut R) -> Result<()>;

    /// Experience of `human` over the period just finished, in [0, 1].
    fn experience(&mut self, human: usize) -> Result<T>;

    /// Called with every human's experience once the period is scored.
    fn end_period(&mut self, _experiences: &[T]) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatePerformance<T> {
    /// Mean of the per-human experiences.
    pub performance: T,
    pub experiences: Vec<T>,
    /// Mixed action at the start of the period.
    pub first_action: T,
    /// Mean mixed action over all actuations of the period.
    pub mean_action: T,
    /// Mediated rate at the start of the period.
    pub rate: usize,
    pub actuations: usize,
}

fn tagged<T, S: HumanStacks<T> + ?Sized, V>(stacks: &S, human: usize, r: Result<V>) -> Result<V>
where
    T: Scalar,
{
    r.map_err(|e| match e {
        e @ Error::Human { .. } => e,
        e => Error::Human {
            human: stacks.human_label(human),
            source: Box::new(e),
        },
    })
}

/// Runs one evaluation period with the given weights and returns the mean experience.
pub fn calculate_state_performance<T, S, R>(
    weights: &WeightState,
    stacks: &mut S,
    rng: &mut R,
) -> Result<StatePerformance<T>>
where
    T: Scalar,
    S: HumanStacks<T> + ?Sized,
    R: Rng + ?Sized,
{
    let n = stacks.n_humans();
    if weights.n_humans() != n {
        return Err(Error::Config(format!(
            "weight state has {} humans, stacks have {n}",
            weights.n_humans()
        )));
    }
    let w = weights.weights::<T>();
    let total = stacks.period_ticks();
    stacks.begin_period(rng)?;
    let mut elapsed = 0;
    let mut first = None;
    let mut applied = Vec::new();
    while elapsed < total {
        let mut actions = Vec::with_capacity(n);
        let mut rates = Vec::with_capacity(n);
        for h in 0..n {
            let p = stacks.proposal(h, rng);
            let (a, r) = tagged(stacks, h, p)?;
            actions.push(a);
            rates.push(r);
        }
        let a_t = stacks.quantize(wavg(&actions, &w)?);
        let rate = mediate_actuation_rates(&rates)?;
        first.get_or_insert((a_t, rate));
        stacks.echo(a_t, rate)?;
        let ticks = rate.min(total - elapsed);
        stacks.advance(a_t, ticks, rng)?;
        applied.push(a_t);
        elapsed += ticks;
    }
    let mut experiences = Vec::with_capacity(n);
    for h in 0..n {
        let e = stacks.experience(h);
        let e = tagged(stacks, h, e)?;
        if !(e >= T::zero() && e <= T::one()) {
            return Err(Error::Human {
                human: stacks.human_label(h),
                source: Box::new(Error::range("experience", to_f64(e), 0.0, 1.0)),
            });
        }
        experiences.push(e);
    }
    stacks.end_period(&experiences)?;
    let (first_action, rate) = first.ok_or_else(|| Error::Config("evaluation period has zero ticks".into()))?;
    Ok(StatePerformance {
        performance: mean(&experiences).expect("nonempty"),
        experiences,
        first_action,
        mean_action: mean(&applied).expect("nonempty"),
        rate,
        actuations: applied.len(),
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::{prop_assert, prop_assume, proptest};
    use rand::SeedableRng;

    /// Humans with fixed proposals and experiences that record what was echoed.
    pub(crate) struct StubHumans {
        pub actions: Vec<f64>,
        pub rates: Vec<usize>,
        pub experiences: Vec<f64>,
        pub ticks: usize,
        pub echoed: Vec<(f64, usize)>,
        pub fail: Option<usize>,
    }

    impl StubHumans {
        pub fn new(actions: Vec<f64>, rates: Vec<usize>, experiences: Vec<f64>) -> Self {
            Self {
                actions,
                rates,
                experiences,
                ticks: 10,
                echoed: Vec::new(),
                fail: None,
            }
        }
    }

    impl HumanStacks<f64> for StubHumans {
        fn n_humans(&self) -> usize {
            self.actions.len()
        }
        fn period_ticks(&self) -> usize {
            self.ticks
        }
        fn proposal<R: Rng + ?Sized>(&mut self, h: usize, _: &mut R) -> Result<(f64, usize)> {
            if self.fail == Some(h) {
                return Err(Error::NonFinite("stub"));
            }
            Ok((self.actions[h], self.rates[h]))
        }
        fn quantize(&self, a: f64) -> f64 {
            round_half_up(a)
        }
        fn echo(&mut self, a: f64, rate: usize) -> Result<()> {
            self.echoed.push((a, rate));
            Ok(())
        }
        fn advance<R: Rng + ?Sized>(&mut self, _: f64, _: usize, _: &mut R) -> Result<()> {
            Ok(())
        }
        fn experience(&mut self, h: usize) -> Result<f64> {
            Ok(self.experiences[h])
        }
    }

    #[test]
    fn worked_example_setpoint() {
        let a: f64 = wavg(&[72.0, 75.0, 78.0], &[0.2, 0.6, 0.4]).unwrap();
        assert!((a - 75.5).abs() < 1e-12);
        assert_eq!(round_half_up(a), 76.0);
        assert_eq!(round_half_up(75.49f64), 75.0);
        assert_eq!(round_half_up(-0.5f64), 0.0);
    }

    #[test]
    fn wavg_trivial() {
        assert_eq!(wavg(&[3.0, 3.0, 3.0], &[1.0, 1.0, 1.0]).unwrap(), 3.0);
        assert_eq!(wavg(&[5.0, 1.0, 9.0], &[1.0, 0.0, 0.0]).unwrap(), 5.0);
        assert!(matches!(wavg(&[1.0, 2.0], &[0.0, 0.0]), Err(Error::UndefinedMediation)));
        assert!(wavg(&[1.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn rates() {
        assert_eq!(mediate_actuation_rates(&[8, 12, 16]).unwrap(), 8);
        assert_eq!(mediate_actuation_rates(&[10]).unwrap(), 10);
        assert_eq!(mediate_actuation_rates(&[6, 6, 6]).unwrap(), 6);
        assert!(mediate_actuation_rates(&[]).is_err());
    }

    #[test]
    fn stub_performance_is_mean() {
        let mut stubs = StubHumans::new(vec![72.0, 75.0, 78.0], vec![4, 3, 6], vec![0.2, 0.4, 0.6]);
        let w = WeightState::new(vec![1, 3, 1], 5).unwrap();
        let mut rng = crate::SimRng::seed_from_u64(1);
        let p = calculate_state_performance(&w, &mut stubs, &mut rng).unwrap();
        assert!((p.performance - 0.4).abs() < 1e-12);
        assert_eq!(p.rate, 3);
        assert_eq!(p.actuations, 4);
        assert_eq!(p.first_action, 75.0);
        assert!(stubs.echoed.iter().all(|&e| e == (75.0, 3)));
    }

    #[test]
    fn failure_names_human() {
        let mut stubs = StubHumans::new(vec![1.0, 2.0], vec![1, 1], vec![0.5, 0.5]);
        stubs.fail = Some(1);
        let w = WeightState::new(vec![1, 1], 2).unwrap();
        let mut rng = crate::SimRng::seed_from_u64(1);
        match calculate_state_performance(&w, &mut stubs, &mut rng) {
            Err(Error::Human { human, .. }) => assert_eq!(human, "H2"),
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        #[test]
        fn wavg_is_bounded(
            pairs in proptest::collection::vec((-100.0..100.0_f64, 0.0..1.0_f64), 1..6)
        ) {
            let (a, w): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            prop_assume!(w.iter().sum::<f64>() > 1e-6);
            let m = wavg(&a, &w).unwrap();
            let lo = a.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(m >= lo - 1e-9 && m <= hi + 1e-9);
        }
    }
}
