use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Scalar};
use crate::{Error, Result};

/// Exhaled breath temperature, degC.
pub const EBT_DEFAULT: f64 = 34.0;

/// W per (L/min * degC), so that a seated adult at rest gives off 100 W.
pub const HEAT_PER_RMV_EBT: f64 = 100.0 / (6.0 * EBT_DEFAULT);

/// Activities ordered by respiratory minute volume, lowest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Activity {
    Sleeping,
    SeatedRelaxed,
    StandingAtRest,
    StandingLight,
    LightDomestic,
    StandingMedium,
    WashingDishes,
    Running,
    NotHome,
}

impl Activity {
    pub const ALL: [Activity; 9] = [
        Activity::Sleeping,
        Activity::SeatedRelaxed,
        Activity::StandingAtRest,
        Activity::StandingLight,
        Activity::LightDomestic,
        Activity::StandingMedium,
        Activity::WashingDishes,
        Activity::Running,
        Activity::NotHome,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Respiratory minute volume, L/min.
    pub fn rmv(self) -> f64 {
        match self {
            Activity::Sleeping => 5.0,
            Activity::SeatedRelaxed => 6.0,
            Activity::StandingAtRest => 6.5,
            Activity::StandingLight => 7.5,
            Activity::LightDomestic => 8.5,
            Activity::StandingMedium => 9.5,
            Activity::WashingDishes => 10.5,
            Activity::Running => 12.0,
            Activity::NotHome => 0.0,
        }
    }

    /// Metabolic rate, met. `None` when nobody is home.
    pub fn met(self) -> Option<f64> {
        Some(match self {
            Activity::Sleeping => 0.7,
            Activity::SeatedRelaxed => 1.0,
            Activity::StandingAtRest => 1.2,
            Activity::StandingLight => 1.6,
            Activity::LightDomestic => 1.7,
            Activity::StandingMedium => 2.0,
            Activity::WashingDishes => 1.8,
            Activity::Running => 4.0,
            Activity::NotHome => return None,
        })
    }

    pub fn is_home(self) -> bool {
        self != Activity::NotHome
    }

    pub fn label(self) -> &'static str {
        match self {
            Activity::Sleeping => "sleeping",
            Activity::SeatedRelaxed => "seated-relaxed",
            Activity::StandingAtRest => "standing-at-rest",
            Activity::StandingLight => "standing-light",
            Activity::LightDomestic => "light-domestic",
            Activity::StandingMedium => "standing-medium",
            Activity::WashingDishes => "washing-dishes",
            Activity::Running => "running",
            Activity::NotHome => "not-home",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupantProfile<T> {
    pub id: String,
    /// Candidate activities for every hour of the day.
    pub schedule: Vec<Vec<Activity>>,
    pub ebt: T,
    /// Clothing while awake, clo.
    pub clothing_awake: T,
    /// Clothing plus bedding while asleep, clo.
    pub clothing_asleep: T,
    /// Multiplier on the metabolic rate.
    pub stress: T,
    /// Lag of the perceived temperature behind the room temperature, s.
    pub response_time: f64,
}

fn schedule(spans: &[(std::ops::RangeInclusive<usize>, &[Activity])]) -> Vec<Vec<Activity>> {
    let mut s = vec![Vec::new(); 24];
    for (hours, acts) in spans {
        for h in hours.clone() {
            s[h] = acts.to_vec();
        }
    }
    s
}

impl<T: Scalar> OccupantProfile<T> {
    pub fn validate(&self) -> Result<()> {
        if self.schedule.len() != 24 {
            return Err(Error::Config(format!("{}: schedule needs 24 hours", self.id)));
        }
        if let Some(h) = self.schedule.iter().position(|s| s.is_empty()) {
            return Err(Error::Config(format!("{}: hour {h} has no activity", self.id)));
        }
        if !(self.stress > T::zero() && self.ebt > T::zero() && self.response_time >= 0.0) {
            return Err(Error::Config(format!("{}: stress, EBT and response time must be positive", self.id)));
        }
        Ok(())
    }

    /// Early riser who works a day shift.
    pub fn h1() -> Self {
        use Activity::*;
        Self {
            id: "H1".into(),
            schedule: schedule(&[
                (0..=5, &[Sleeping]),
                (6..=6, &[Sleeping, StandingAtRest, Running]),
                (7..=7, &[StandingLight]),
                (8..=16, &[NotHome]),
                (17..=17, &[StandingLight, SeatedRelaxed, StandingMedium]),
                (18..=18, &[SeatedRelaxed, StandingMedium, WashingDishes]),
                (19..=19, &[SeatedRelaxed, StandingMedium, WashingDishes, LightDomestic]),
                (20..=20, &[SeatedRelaxed, StandingAtRest]),
                (21..=21, &[SeatedRelaxed]),
                (22..=23, &[Sleeping]),
            ]),
            ebt: lit(EBT_DEFAULT),
            clothing_awake: lit(1.1),
            clothing_asleep: lit(1.9),
            stress: lit(1.0),
            response_time: 600.0,
        }
    }

    /// Late riser with a long working day, stressed.
    pub fn h2() -> Self {
        use Activity::*;
        Self {
            id: "H2".into(),
            schedule: schedule(&[
                (0..=7, &[Sleeping]),
                (8..=9, &[Sleeping, StandingAtRest]),
                (10..=18, &[NotHome]),
                (19..=20, &[StandingLight, SeatedRelaxed, StandingMedium]),
                (21..=22, &[SeatedRelaxed, StandingMedium, WashingDishes]),
                (23..=23, &[SeatedRelaxed, StandingAtRest]),
            ]),
            ebt: lit(EBT_DEFAULT),
            clothing_awake: lit(1.0),
            clothing_asleep: lit(2.0),
            stress: lit(1.2),
            response_time: 360.0,
        }
    }

    /// Short working day, home most of the time.
    pub fn h3() -> Self {
        use Activity::*;
        Self {
            id: "H3".into(),
            schedule: schedule(&[
                (0..=9, &[Sleeping]),
                (10..=10, &[Sleeping, StandingAtRest]),
                (11..=14, &[NotHome]),
                (15..=15, &[StandingLight, StandingMedium]),
                (16..=17, &[SeatedRelaxed, StandingMedium, LightDomestic]),
                (18..=18, &[StandingMedium, WashingDishes]),
                (19..=19, &[StandingLight, StandingMedium]),
                (20..=23, &[SeatedRelaxed, StandingAtRest, StandingLight]),
            ]),
            ebt: lit(EBT_DEFAULT),
            clothing_awake: lit(1.3),
            clothing_asleep: lit(2.0),
            stress: lit(1.0),
            response_time: 1200.0,
        }
    }

    pub fn standard(id: &str) -> Option<Self> {
        match id {
            "H1" | "h1" => Some(Self::h1()),
            "H2" | "h2" => Some(Self::h2()),
            "H3" | "h3" => Some(Self::h3()),
            _ => None,
        }
    }

    pub fn clothing(&self, activity: Activity) -> T {
        if activity == Activity::Sleeping {
            self.clothing_asleep
        } else {
            self.clothing_awake
        }
    }

    /// Metabolic rate including stress, clamped to the range the comfort model accepts.
    pub fn metabolic_rate(&self, activity: Activity) -> Option<T> {
        activity
            .met()
            .map(|m| (lit::<T>(m) * self.stress).max(lit(0.5)).min(lit(5.0)))
    }

    pub fn hours_home(&self) -> f64 {
        self.schedule
            .iter()
            .map(|s| s.iter().filter(|a| a.is_home()).count() as f64 / s.len() as f64)
            .sum()
    }
}

/// Uniform choice among the candidate activities of `hour`.
pub fn sample_activity<T: Scalar, R: Rng + ?Sized>(profile: &OccupantProfile<T>, hour: usize, rng: &mut R) -> Activity {
    *profile.schedule[hour % 24]
        .choose(rng)
        .expect("validated schedules have no empty hour")
}

/// Heat given off by an occupant, proportional to RMV times exhaled breath temperature.
pub fn occupant_heat_flow<T: Scalar>(profile: &OccupantProfile<T>, activity: Activity) -> T {
    lit::<T>(HEAT_PER_RMV_EBT * activity.rmv()) * profile.ebt
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SimRng;
    use rand::SeedableRng;
    use std::collections::HashSet;

    #[test]
    fn schedules_cover_every_hour() {
        for p in [OccupantProfile::<f64>::h1(), OccupantProfile::h2(), OccupantProfile::h3()] {
            p.validate().unwrap();
        }
    }

    #[test]
    fn table_entries() {
        use Activity::*;
        let h1 = OccupantProfile::<f64>::h1();
        let mut rng = SimRng::seed_from_u64(0);
        assert_eq!(sample_activity(&h1, 3, &mut rng), Sleeping);
        assert_eq!(sample_activity(&h1, 10, &mut rng), NotHome);
        let seen: HashSet<_> = (0..200).map(|_| sample_activity(&h1, 6, &mut rng)).collect();
        assert_eq!(seen, HashSet::from([Sleeping, StandingAtRest, Running]));
        assert_eq!(OccupantProfile::<f64>::h2().schedule[12], vec![NotHome]);
        assert_eq!(OccupantProfile::<f64>::h3().schedule[18], vec![StandingMedium, WashingDishes]);
    }

    #[test]
    fn third_occupant_is_home_longest() {
        let h = |p: OccupantProfile<f64>| p.hours_home();
        assert!(h(OccupantProfile::h3()) > h(OccupantProfile::h1()));
        assert!(h(OccupantProfile::h3()) > h(OccupantProfile::h2()));
    }

    #[test]
    fn heat_flow() {
        let p = OccupantProfile::<f64>::h1();
        assert_eq!(occupant_heat_flow(&p, Activity::NotHome), 0.0);
        assert!((occupant_heat_flow(&p, Activity::SeatedRelaxed) - 100.0).abs() < 5.0);
        let ratio = occupant_heat_flow(&p, Activity::Running) / occupant_heat_flow(&p, Activity::SeatedRelaxed);
        assert!((ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rmv_follows_activity_order() {
        let home: Vec<f64> = Activity::ALL.iter().filter(|a| a.is_home()).map(|a| a.rmv()).collect();
        assert!(home.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(home.first(), Some(&5.0));
    }

    #[test]
    fn stress_scales_met() {
        let p = OccupantProfile::<f64>::h2();
        assert!((p.metabolic_rate(Activity::SeatedRelaxed).unwrap() - 1.2).abs() < 1e-12);
        assert_eq!(p.metabolic_rate(Activity::NotHome), None);
        assert!(p.metabolic_rate(Activity::Running).unwrap() <= 5.0);
    }
}
