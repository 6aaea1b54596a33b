use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::fcw::{
    alarm_decision, classify_window, driver_step, step_vehicle, time_to_collision, AlarmPolicy, DriverProfile,
    DriverState, Label, LeadScript, Vehicle, VehicleParams, VehiclePairState, WindowSummary, SAFETY_GAP,
};
use crate::governor::TunableSystem;
use crate::metrics::{fcw_performance, ConfusionCounts};
use crate::rl::{multisample_run, Environment, LearningParams, QTable, TimeScales};
use crate::scalar::{lit, to_f64, Scalar};
use crate::{Result, SimRng};

/// Sampling period of the collision warning, s.
pub const FCW_SAMPLE_PERIOD: f64 = 0.25;

/// Length of one evaluation drive, s.
pub const FCW_DRIVE_SECONDS: f64 = 1800.0;

const GAP_EDGES: [f64; 3] = [SAFETY_GAP, 15.0, 30.0];
const CLOSING_EDGES: [f64; 2] = [0.0, 5.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriveLogRow {
    pub clock: f64,
    pub ego_position: f64,
    pub ego_velocity: f64,
    pub lead_position: f64,
    pub lead_velocity: f64,
    pub gap: f64,
    pub ttc: Option<f64>,
    pub alarm: bool,
    pub pedal: f64,
    /// Set on the last tick of every classification window.
    pub label: Option<&'static str>,
}

fn stream(seed: u64, id: u64) -> SimRng {
    let mut r = SimRng::seed_from_u64(seed);
    r.set_stream(id);
    r
}

/// A driver following a scripted lead car, with an adaptive time-to-collision alarm.
///
/// Traffic and driver reactions come from the environment's own random streams, kept
/// apart so that every learner setting faces the same lead-car script.
#[derive(Debug, Clone)]
pub struct FcwEnv<T> {
    pub vehicle: VehicleParams<T>,
    driver: DriverProfile<T>,
    lead: LeadScript<T>,
    pair: VehiclePairState<T>,
    driver_state: DriverState,
    policy: AlarmPolicy<T>,
    traffic_rng: SimRng,
    driver_rng: SimRng,
    window_len: usize,
    window: WindowSummary,
    window_ticks: usize,
    reward_counts: ConfusionCounts,
    run_counts: ConfusionCounts,
    collisions: usize,
    log: Option<Vec<DriveLogRow>>,
}

impl<T: Scalar> FcwEnv<T> {
    pub fn new(driver: DriverProfile<T>, seed: u64) -> Result<Self> {
        driver.validate()?;
        let vehicle = VehicleParams::default();
        vehicle.validate()?;
        let lead = LeadScript::default();
        let speed = lead.cruise_speed;
        let pair = VehiclePairState::new(
            Vehicle {
                position: T::zero(),
                velocity: speed,
            },
            Vehicle {
                position: driver.preferred_gap * lit(1.2),
                velocity: speed,
            },
        )?;
        Ok(Self {
            vehicle,
            driver,
            lead,
            pair,
            driver_state: DriverState::default(),
            policy: AlarmPolicy::default(),
            traffic_rng: stream(seed, 0),
            driver_rng: stream(seed, 1),
            window_len: 1,
            window: WindowSummary::default(),
            window_ticks: 0,
            reward_counts: ConfusionCounts::default(),
            run_counts: ConfusionCounts::default(),
            collisions: 0,
            log: None,
        })
    }

    pub fn driver(&self) -> &DriverProfile<T> {
        &self.driver
    }

    /// Puts a different human behind the wheel; the road carries on.
    pub fn set_driver(&mut self, driver: DriverProfile<T>) -> Result<()> {
        driver.validate()?;
        self.driver = driver;
        self.driver_state = DriverState::default();
        Ok(())
    }

    pub fn state(&self) -> &VehiclePairState<T> {
        &self.pair
    }

    pub fn collisions(&self) -> usize {
        self.collisions
    }

    pub fn enable_log(&mut self) {
        self.log = Some(Vec::new());
    }

    pub fn take_log(&mut self) -> Vec<DriveLogRow> {
        self.log.take().unwrap_or_default()
    }

    fn bucket(x: f64, edges: &[f64]) -> usize {
        edges.iter().take_while(|&&e| x >= e).count()
    }

    fn close_window(&mut self) -> Label {
        let label = classify_window(&self.window);
        let one = match label {
            Label::Tp => ConfusionCounts::new(1, 0, 0, 0),
            Label::Fp => ConfusionCounts::new(0, 1, 0, 0),
            Label::Tn => ConfusionCounts::new(0, 0, 1, 0),
            Label::Fn => ConfusionCounts::new(0, 0, 0, 1),
        };
        self.reward_counts += one;
        self.run_counts += one;
        self.window = WindowSummary::default();
        self.window_ticks = 0;
        label
    }
}

impl<T: Scalar> Environment<T> for FcwEnv<T> {
    fn n_states(&self) -> usize {
        (GAP_EDGES.len() + 1) * (CLOSING_EDGES.len() + 1)
    }

    fn n_actions(&self) -> usize {
        self.policy.thresholds.len()
    }

    fn begin_run(&mut self, scales: &TimeScales) {
        self.window_len = scales.t_a;
        self.window = WindowSummary::default();
        self.window_ticks = 0;
        self.reward_counts = ConfusionCounts::default();
        self.run_counts = ConfusionCounts::default();
    }

    fn observe(&self) -> usize {
        let g = Self::bucket(to_f64(self.pair.gap()), &GAP_EDGES);
        let c = if self.pair.closing_speed() <= T::zero() {
            0
        } else {
            1 + Self::bucket(to_f64(self.pair.closing_speed()), &CLOSING_EDGES[1..])
        };
        g * (CLOSING_EDGES.len() + 1) + c
    }

    fn actuate(&mut self, action: usize) -> usize {
        self.policy.current = action;
        action
    }

    fn advance<R: Rng + ?Sized>(&mut self, _rng: &mut R) -> Result<()> {
        let dt = FCW_SAMPLE_PERIOD;
        let ttc = time_to_collision(&self.pair).seconds();
        let alarm = alarm_decision(ttc, self.policy.threshold());
        let cmd = driver_step(&self.driver, &mut self.driver_state, alarm, &self.pair, &mut self.driver_rng);

        let lead_v = self.lead.step(self.pair.lead.velocity, dt, &mut self.traffic_rng);
        let dtt = lit::<T>(dt);
        self.pair.ego = step_vehicle(&self.pair.ego, &self.vehicle, cmd.pedal, dtt);
        self.pair.lead = Vehicle {
            position: self.pair.lead.position + dtt * self.pair.lead.velocity,
            velocity: lead_v,
        };
        self.pair.clock += dt;

        let gap = self.pair.gap();
        let dipped = gap < lit(SAFETY_GAP);
        if gap <= T::zero() {
            self.collisions += 1;
            self.pair.lead.position = self.pair.ego.position + self.driver.preferred_gap;
            self.pair.ego.velocity = self.pair.lead.velocity;
            self.driver_state = DriverState::default();
        }
        self.window.absorb(alarm, dipped, cmd.responding);
        self.window_ticks += 1;
        let label = if self.window_ticks >= self.window_len {
            Some(self.close_window().as_str())
        } else {
            None
        };
        if let Some(log) = self.log.as_mut() {
            log.push(DriveLogRow {
                clock: self.pair.clock,
                ego_position: to_f64(self.pair.ego.position),
                ego_velocity: to_f64(self.pair.ego.velocity),
                lead_position: to_f64(self.pair.lead.position),
                lead_velocity: to_f64(self.pair.lead.velocity),
                gap: to_f64(self.pair.gap()),
                ttc: ttc.map(to_f64),
                alarm,
                pedal: to_f64(cmd.pedal),
                label,
            });
        }
        Ok(())
    }

    fn window_reward(&mut self) -> T {
        let c = std::mem::take(&mut self.reward_counts);
        fcw_performance(&c).unwrap_or_else(|_| lit(0.5))
    }

    fn end_run(&mut self) -> Result<T> {
        if self.window_ticks > 0 {
            self.close_window();
        }
        fcw_performance(&self.run_counts)
    }
}

/// An inner learner bound to a collision-warning environment, measured over one drive
/// per evaluation. The learner keeps its Q-table between evaluations.
#[derive(Debug, Clone)]
pub struct FcwSystem<T> {
    pub env: FcwEnv<T>,
    pub q: QTable<T>,
    pub params: LearningParams<T>,
    pub drive_ticks: usize,
}

impl<T: Scalar> FcwSystem<T> {
    pub fn new(driver: DriverProfile<T>, params: LearningParams<T>, seed: u64) -> Result<Self> {
        let env = FcwEnv::new(driver, seed)?;
        let q = QTable::new(env.n_states(), env.n_actions())?;
        Ok(Self {
            env,
            q,
            params,
            drive_ticks: (FCW_DRIVE_SECONDS / FCW_SAMPLE_PERIOD).round() as usize,
        })
    }
}

impl<T: Scalar> TunableSystem<T> for FcwSystem<T> {
    fn evaluate<R: Rng + ?Sized>(&mut self, scales: &TimeScales, rng: &mut R) -> Result<T> {
        let duration = self.drive_ticks.div_ceil(scales.t_l) * scales.t_l;
        Ok(multisample_run(&mut self.env, &mut self.q, scales, &self.params, duration, rng)?.performance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scales() -> TimeScales {
        TimeScales::new(FCW_SAMPLE_PERIOD, 10, 80).unwrap()
    }

    #[test]
    fn state_buckets() {
        let mut env = FcwEnv::<f64>::new(DriverProfile::h1(), 0).unwrap();
        assert_eq!(env.n_states(), 12);
        env.pair.lead.position = 5.0;
        env.pair.ego.velocity = 30.0;
        env.pair.lead.velocity = 22.0;
        assert_eq!(env.observe(), 2);
        env.pair.lead.position = 100.0;
        env.pair.ego.velocity = 10.0;
        assert_eq!(env.observe(), 9);
    }

    #[test]
    fn windows_partition_the_drive() {
        let mut sys = FcwSystem::<f64>::new(DriverProfile::h2(), LearningParams::default(), 3).unwrap();
        let mut rng = SimRng::seed_from_u64(1);
        let s = scales();
        let p = sys.evaluate(&s, &mut rng).unwrap();
        assert!((0.0..=1.0).contains(&p));
        let c = sys.env.run_counts;
        assert_eq!(c.total() as usize, (7200usize.div_ceil(80) * 80).div_ceil(10));
    }

    #[test]
    fn drives_are_reproducible() {
        let go = || {
            let mut sys = FcwSystem::<f64>::new(DriverProfile::h1(), LearningParams::default(), 5).unwrap();
            sys.env.enable_log();
            let mut rng = SimRng::seed_from_u64(2);
            let p = sys.evaluate(&scales(), &mut rng).unwrap();
            (p, sys.env.take_log())
        };
        let (a, b) = (go(), go());
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
        assert!(a.1.iter().all(|r| r.ego_velocity >= 0.0));
    }

    #[test]
    fn produces_close_calls() {
        let mut sys = FcwSystem::<f64>::new(DriverProfile::h2(), LearningParams::default(), 11).unwrap();
        let mut rng = SimRng::seed_from_u64(0);
        sys.evaluate(&scales(), &mut rng).unwrap();
        let c = sys.env.run_counts;
        assert!(c.tp + c.fn_ > 0, "{c:?}");
        assert!(c.tn > 0, "{c:?}");
    }
}
