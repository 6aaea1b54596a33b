use rand::Rng;

use crate::rl::{LearningParams, QTable};
use crate::scalar::{lit, to_f64, Scalar};
use crate::{Error, Result};

/// Epsilon-greedy action selection.
///
/// Exactly one uniform draw decides between exploring and exploiting, plus one more
/// draw for the random action when exploring.
pub fn select_action<T: Scalar, R: Rng + ?Sized>(
    q: &QTable<T>,
    state: usize,
    epsilon: T,
    rng: &mut R,
) -> Result<usize> {
    let eps = to_f64(epsilon);
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::range("epsilon", eps, 0.0, 1.0));
    }
    let greedy = q.greedy(state)?;
    if rng.gen::<f64>() < eps {
        Ok(rng.gen_range(0..q.n_actions()))
    } else {
        Ok(greedy)
    }
}

/// One-step Q-learning update of entry `(s, a)`.
pub fn q_update<T: Scalar>(
    q: &mut QTable<T>,
    s: usize,
    a: usize,
    reward: T,
    s_next: usize,
    params: &LearningParams<T>,
) -> Result<()> {
    if !reward.is_finite() {
        return Err(Error::NonFinite("reward"));
    }
    let old = q.get(s, a)?;
    let target = reward + params.gamma * q.max_value(s_next)?;
    q.set(s, a, (T::one() - params.alpha) * old + params.alpha * target)
}

/// Halves epsilon (down to the floor) when the last `stagnation_window` rewards are
/// identical within 1e-9.
pub fn epsilon_schedule<T: Scalar>(epsilon: T, rewards: &[T], params: &LearningParams<T>) -> T {
    let window = params.stagnation_window;
    if window == 0 || rewards.len() < window {
        return epsilon;
    }
    let tail = &rewards[rewards.len() - window..];
    let first = tail[0];
    let tol = lit::<T>(1e-9);
    if tail.iter().all(|&r| (r - first).abs() <= tol) {
        (epsilon / lit(2.0)).max(params.epsilon_floor)
    } else {
        epsilon
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    use crate::SimRng;

    fn table(row: &[f64]) -> QTable<f64> {
        let mut q = QTable::new(2, row.len()).unwrap();
        for (a, &v) in row.iter().enumerate() {
            q.set(1, a, v).unwrap();
        }
        q
    }

    #[test]
    fn greedy_picks_argmax() {
        let q = table(&[0.1, 0.9, 0.3]);
        let mut rng = SimRng::seed_from_u64(1);
        assert_eq!(select_action(&q, 1, 0.0, &mut rng).unwrap(), 1);
    }

    #[test]
    fn greedy_ties_go_to_lowest_index() {
        let q = table(&[0.5, 0.5, 0.1]);
        let mut rng = SimRng::seed_from_u64(1);
        assert_eq!(select_action(&q, 1, 0.0, &mut rng).unwrap(), 0);
    }

    #[test]
    fn full_exploration_is_uniform() {
        let q = QTable::<f64>::new(1, 4).unwrap();
        let mut rng = SimRng::seed_from_u64(7);
        let n = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..n {
            counts[select_action(&q, 0, 1.0, &mut rng).unwrap()] += 1;
        }
        let sigma = (n as f64 * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!((c as f64 - n as f64 * 0.25).abs() < 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn state_out_of_range() {
        let q = QTable::<f64>::new(2, 2).unwrap();
        let mut rng = SimRng::seed_from_u64(0);
        assert!(matches!(
            select_action(&q, 5, 0.1, &mut rng),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(select_action(&q, 0, 1.5, &mut rng).is_err());
    }

    #[test]
    fn update_arithmetic() {
        let p = LearningParams::<f64>::default();
        let mut q = QTable::new(2, 2).unwrap();
        q_update(&mut q, 0, 1, 1.0, 1, &p).unwrap();
        assert!((q.get(0, 1).unwrap() - 0.9).abs() < 1e-12);

        // Q(s,a)=0.9, next-state max 0.9: 0.1*0.9 + 0.9*(1 + 0.1*0.9) = 1.071
        let mut q = QTable::new(2, 2).unwrap();
        q.set(0, 0, 0.9).unwrap();
        q.set(1, 1, 0.9).unwrap();
        q_update(&mut q, 0, 0, 1.0, 1, &p).unwrap();
        assert!((q.get(0, 0).unwrap() - 1.071).abs() < 1e-12);
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let p = LearningParams::<f64>::default();
        let mut q = QTable::new(3, 3).unwrap();
        q_update(&mut q, 1, 2, 0.0, 0, &p).unwrap();
        assert!(q.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rejects_non_finite_reward() {
        let p = LearningParams::<f64>::default();
        let mut q = QTable::new(1, 1).unwrap();
        assert!(matches!(
            q_update(&mut q, 0, 0, f64::INFINITY, 0, &p),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn epsilon_halves_on_stagnation() {
        let p = LearningParams::<f64>::default();
        assert_eq!(epsilon_schedule(0.2, &[1.5; 50], &p), 0.1);
        let varying: Vec<f64> = (0..50).map(|i| i as f64).collect();
        assert_eq!(epsilon_schedule(0.2, &varying, &p), 0.2);
        assert_eq!(epsilon_schedule(0.0125, &[0.0; 60], &p), 0.01);
        assert_eq!(epsilon_schedule(0.2, &[1.0; 49], &p), 0.2);
    }
}
