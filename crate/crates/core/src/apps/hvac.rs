use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::governor::TunableSystem;
use crate::metrics::{goodness, hvac_performance, pmv, ComfortConfig, PmvInputs};
use crate::rl::{multisample_run, Environment, LearningParams, QTable, TimeScales};
use crate::scalar::{lit, to_f64, Scalar};
use crate::thermal::{
    c_to_f, occupant_heat_flow, sample_activity, step_house, thermostat_command, Activity, HouseParams,
    OccupantProfile, OutdoorClimate, ThermalState,
};
use crate::{Error, Result, SimRng};

/// Sampling period of the thermostat learner, s.
pub const HVAC_SAMPLE_PERIOD: f64 = 360.0;

/// Samples in one inner run: five days.
pub const HVAC_RUN_SAMPLES: usize = 5 * 240;

/// Set-points the learners choose from, degF.
pub const SETPOINTS_F: [f64; 6] = [70.0, 72.0, 74.0, 76.0, 78.0, 80.0];

const TEMP_BUCKET_LO_F: f64 = 60.0;
const TEMP_BUCKETS: usize = 21;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HouseLogRow {
    pub clock: f64,
    pub t_room: f64,
    pub t_out: f64,
    pub heater_on: bool,
    pub setpoint: f64,
    pub activities: Vec<&'static str>,
    pub pmv: Vec<f64>,
}

#[derive(Debug, Clone)]
struct Occupant<T> {
    profile: OccupantProfile<T>,
    activity: Activity,
    perceived: T,
}

/// A house with its occupants, advanced one learner sample at a time.
///
/// Weather and activity draws come from the house's own random stream, so two houses
/// built from the same seed see the same days whatever their set-points.
#[derive(Debug, Clone)]
pub struct HouseSim<T> {
    pub params: HouseParams<T>,
    state: ThermalState<T>,
    climate: OutdoorClimate,
    setpoint_f: T,
    occupants: Vec<Occupant<T>>,
    rng: SimRng,
    hour: Option<u64>,
    samples: usize,
    log: Option<Vec<HouseLogRow>>,
    log_from: usize,
}

impl<T: Scalar> HouseSim<T> {
    pub fn new(profiles: Vec<OccupantProfile<T>>, seed: u64) -> Result<Self> {
        let params = HouseParams::default();
        params.validate()?;
        for p in &profiles {
            p.validate()?;
        }
        let mut rng = SimRng::seed_from_u64(seed);
        let climate = OutdoorClimate::new(rng.gen());
        let t0 = lit::<T>(20.0);
        Ok(Self {
            params,
            state: ThermalState::new(t0, climate.temperature(0.0)),
            climate,
            setpoint_f: lit(SETPOINTS_F[0]),
            occupants: profiles
                .into_iter()
                .map(|profile| Occupant {
                    profile,
                    activity: Activity::NotHome,
                    perceived: t0,
                })
                .collect(),
            rng,
            hour: None,
            samples: 0,
            log: None,
            log_from: 0,
        })
    }

    pub fn n_occupants(&self) -> usize {
        self.occupants.len()
    }

    pub fn profile(&self, i: usize) -> &OccupantProfile<T> {
        &self.occupants[i].profile
    }

    /// Replaces an occupant's profile; the new person takes over from the next hour.
    pub fn set_profile(&mut self, i: usize, profile: OccupantProfile<T>) -> Result<()> {
        profile.validate()?;
        let o = self.occupants.get_mut(i).ok_or(Error::IndexOutOfRange {
            what: "occupant",
            index: i,
            len: 0,
        })?;
        o.profile = profile;
        Ok(())
    }

    pub fn activity(&self, i: usize) -> Activity {
        self.occupants[i].activity
    }

    pub fn state(&self) -> &ThermalState<T> {
        &self.state
    }

    pub fn setpoint(&self) -> T {
        self.setpoint_f
    }

    pub fn set_setpoint(&mut self, setpoint_f: T) {
        self.setpoint_f = setpoint_f;
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn enable_log(&mut self) {
        self.enable_log_from(0);
    }

    /// Logs only samples whose index is at least `start`.
    pub fn enable_log_from(&mut self, start: usize) {
        self.log = Some(Vec::new());
        self.log_from = start;
    }

    pub fn take_log(&mut self) -> Vec<HouseLogRow> {
        self.log.take().unwrap_or_default()
    }

    /// Room temperature bucket (whole degF from 60 to 80) crossed with the activity.
    pub fn observe(&self, occupant: usize) -> usize {
        let f = to_f64(c_to_f(self.state.t_room)).round() - TEMP_BUCKET_LO_F;
        let bucket = f.clamp(0.0, (TEMP_BUCKETS - 1) as f64) as usize;
        bucket * Activity::ALL.len() + self.occupants[occupant].activity.index()
    }

    pub fn n_observations() -> usize {
        TEMP_BUCKETS * Activity::ALL.len()
    }

    fn occupant_pmv(o: &Occupant<T>) -> Result<T> {
        let Some(met) = o.profile.metabolic_rate(o.activity) else {
            return Ok(T::zero());
        };
        let inputs = PmvInputs::indoor(o.perceived, met, o.profile.clothing(o.activity));
        pmv(&inputs)
    }

    /// Advances one sampling period and returns every occupant's PMV (0 while away).
    pub fn sample(&mut self) -> Result<Vec<T>> {
        let hour = (self.state.clock / 3600.0).floor() as u64;
        if self.hour != Some(hour) {
            self.hour = Some(hour);
            for o in self.occupants.iter_mut() {
                o.activity = sample_activity(&o.profile, (hour % 24) as usize, &mut self.rng);
            }
        }
        let steps = (HVAC_SAMPLE_PERIOD / to_f64(self.params.dt)).round().max(1.0) as usize;
        let flows: Vec<T> = self
            .occupants
            .iter()
            .map(|o| occupant_heat_flow(&o.profile, o.activity))
            .collect();
        for _ in 0..steps {
            self.state.t_out = self.climate.temperature(self.state.clock);
            let on = thermostat_command(&self.state, self.setpoint_f);
            self.state = step_house(&self.state, &self.params, &flows, on)?;
        }
        let mut out = Vec::with_capacity(self.occupants.len());
        for o in self.occupants.iter_mut() {
            let tau = o.profile.response_time;
            let k = if tau > 0.0 {
                lit::<T>(1.0 - (-HVAC_SAMPLE_PERIOD / tau).exp())
            } else {
                T::one()
            };
            o.perceived = o.perceived + k * (self.state.t_room - o.perceived);
            out.push(Self::occupant_pmv(o)?);
        }
        self.samples += 1;
        if let Some(log) = self.log.as_mut().filter(|_| self.samples > self.log_from) {
            log.push(HouseLogRow {
                clock: self.state.clock,
                t_room: to_f64(self.state.t_room),
                t_out: to_f64(self.state.t_out),
                heater_on: self.state.heater_on,
                setpoint: to_f64(self.setpoint_f),
                activities: self.occupants.iter().map(|o| o.activity.label()).collect(),
                pmv: out.iter().map(|&p| to_f64(p)).collect(),
            });
        }
        Ok(out)
    }
}

/// One occupant's thermostat learner: chooses set-points, rewarded by that
/// occupant's comfort.
#[derive(Debug, Clone)]
pub struct HvacEnv<T> {
    pub house: HouseSim<T>,
    pub occupant: usize,
    pub comfort: ComfortConfig<T>,
    setpoints: Vec<T>,
    window: Vec<T>,
    run: Vec<T>,
}

impl<T: Scalar> HvacEnv<T> {
    pub fn new(house: HouseSim<T>, occupant: usize, comfort: ComfortConfig<T>) -> Result<Self> {
        if occupant >= house.n_occupants() {
            return Err(Error::IndexOutOfRange {
                what: "occupant",
                index: occupant,
                len: house.n_occupants(),
            });
        }
        comfort.validate()?;
        Ok(Self {
            house,
            occupant,
            comfort,
            setpoints: SETPOINTS_F.iter().map(|&s| lit(s)).collect(),
            window: Vec::new(),
            run: Vec::new(),
        })
    }

    pub fn setpoints(&self) -> &[T] {
        &self.setpoints
    }
}

impl<T: Scalar> Environment<T> for HvacEnv<T> {
    fn n_states(&self) -> usize {
        HouseSim::<T>::n_observations()
    }

    fn n_actions(&self) -> usize {
        self.setpoints.len()
    }

    fn begin_run(&mut self, _scales: &TimeScales) {
        self.window.clear();
        self.run.clear();
    }

    fn observe(&self) -> usize {
        self.house.observe(self.occupant)
    }

    fn actuate(&mut self, action: usize) -> usize {
        self.house.set_setpoint(self.setpoints[action]);
        action
    }

    fn advance<R: Rng + ?Sized>(&mut self, _rng: &mut R) -> Result<()> {
        let p = self.house.sample()?[self.occupant];
        self.window.push(p);
        self.run.push(p);
        Ok(())
    }

    fn window_reward(&mut self) -> T {
        let r = goodness(&self.window, &self.comfort).unwrap_or(T::one());
        self.window.clear();
        r
    }

    fn end_run(&mut self) -> Result<T> {
        hvac_performance(&self.run, &self.comfort)
    }
}

/// A thermostat learner in a house of its own, measured over five-day runs.
#[derive(Debug, Clone)]
pub struct HvacSystem<T> {
    pub env: HvacEnv<T>,
    pub q: QTable<T>,
    pub params: LearningParams<T>,
    pub duration: usize,
}

impl<T: Scalar> HvacSystem<T> {
    pub fn new(
        profile: OccupantProfile<T>,
        params: LearningParams<T>,
        comfort: ComfortConfig<T>,
        seed: u64,
    ) -> Result<Self> {
        let env = HvacEnv::new(HouseSim::new(vec![profile], seed)?, 0, comfort)?;
        let q = QTable::new(env.n_states(), env.n_actions())?;
        Ok(Self {
            env,
            q,
            params,
            duration: HVAC_RUN_SAMPLES,
        })
    }
}

impl<T: Scalar> TunableSystem<T> for HvacSystem<T> {
    fn evaluate<R: Rng + ?Sized>(&mut self, scales: &TimeScales, rng: &mut R) -> Result<T> {
        let duration = self.duration.div_ceil(scales.t_l) * scales.t_l;
        Ok(multisample_run(&mut self.env, &mut self.q, scales, &self.params, duration, rng)?.performance)
    }
}

/// Trains one occupant's learner alone in a house for `days` days.
pub fn pretrain_learner<T: Scalar, R: Rng + ?Sized>(
    profile: OccupantProfile<T>,
    params: &LearningParams<T>,
    comfort: ComfortConfig<T>,
    scales: &TimeScales,
    days: usize,
    seed: u64,
    rng: &mut R,
) -> Result<QTable<T>> {
    let mut sys = HvacSystem::new(profile, *params, comfort, seed)?;
    let duration = (days * 240).div_ceil(scales.t_l) * scales.t_l;
    if duration > 0 {
        multisample_run(&mut sys.env, &mut sys.q, scales, params, duration, rng)?;
    }
    Ok(sys.q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_days() {
        let mut a = HouseSim::<f64>::new(vec![OccupantProfile::h1(), OccupantProfile::h3()], 9).unwrap();
        let mut b = a.clone();
        a.set_setpoint(70.0);
        b.set_setpoint(80.0);
        for _ in 0..480 {
            a.sample().unwrap();
            b.sample().unwrap();
            assert_eq!(a.activity(0), b.activity(0));
            assert_eq!(a.activity(1), b.activity(1));
            assert_eq!(a.state().t_out, b.state().t_out);
        }
        assert_eq!(a.state().clock, 480.0 * 360.0);
    }

    #[test]
    fn absent_occupants_vote_zero() {
        let mut h = HouseSim::<f64>::new(vec![OccupantProfile::h1()], 1).unwrap();
        for s in 0..240 {
            let p = h.sample().unwrap()[0];
            if !h.activity(0).is_home() {
                assert_eq!(p, 0.0, "sample {s}");
            }
        }
    }

    #[test]
    fn thermostat_tracks_setpoint() {
        let mut h = HouseSim::<f64>::new(vec![], 2).unwrap();
        for sp in [70.0, 80.0] {
            h.set_setpoint(sp);
            let mut temps = Vec::new();
            for _ in 0..240 {
                h.sample().unwrap();
                temps.push(h.state().t_room);
            }
            let m = temps[120..].iter().sum::<f64>() / 120.0;
            let target = crate::thermal::f_to_c(sp);
            assert!((m - target).abs() < 2.5, "{sp}: {m}");
        }
    }

    #[test]
    fn system_runs() {
        let mut sys =
            HvacSystem::<f64>::new(OccupantProfile::h1(), LearningParams::default(), ComfortConfig::default(), 4)
                .unwrap();
        let mut rng = SimRng::seed_from_u64(0);
        let p = sys.evaluate(&TimeScales::new(HVAC_SAMPLE_PERIOD, 4, 20).unwrap(), &mut rng).unwrap();
        assert!((0.0..=1.0).contains(&p));
        assert_eq!(sys.env.house.samples(), 1200);
    }
}
