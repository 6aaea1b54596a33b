use serde::{Deserialize, Serialize};

use crate::scalar::{lit, to_f64, Scalar};
use crate::{Error, Result};

/// Half-width of the thermostat dead band.
pub const THERMOSTAT_BAND_C: f64 = 2.5;

const GUARD_LO: f64 = -30.0;
const GUARD_HI: f64 = 60.0;

pub fn f_to_c<T: Scalar>(f: T) -> T {
    (f - lit(32.0)) * lit(5.0 / 9.0)
}

pub fn c_to_f<T: Scalar>(c: T) -> T {
    c * lit(9.0 / 5.0) + lit(32.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HouseParams<T> {
    /// Equivalent thermal resistance of the envelope, degC/W.
    pub r_eq: T,
    /// Temperature of the air leaving the heater, degC.
    pub heater_temperature: T,
    /// Air mass flow through the heater, kg/s.
    pub mass_flow: T,
    /// Specific heat of air, J/(kg degC).
    pub air_heat_capacity: T,
    /// Mass of the indoor air, kg.
    pub air_mass: T,
    /// Integration step, s.
    pub dt: T,
}

impl<T: Scalar> Default for HouseParams<T> {
    fn default() -> Self {
        Self {
            // 4.329e-7 degC h/J
            r_eq: lit(4.329e-7 * 3600.0),
            heater_temperature: lit(50.0),
            mass_flow: lit(1.0),
            air_heat_capacity: lit(1005.4),
            air_mass: lit(1470.0),
            dt: lit(60.0),
        }
    }
}

impl<T: Scalar> HouseParams<T> {
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("r_eq", self.r_eq),
            ("heater temperature", self.heater_temperature),
            ("mass flow", self.mass_flow),
            ("air heat capacity", self.air_heat_capacity),
            ("air mass", self.air_mass),
            ("dt", self.dt),
        ] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::range(what, to_f64(v), 0.0, f64::INFINITY));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalState<T> {
    pub t_room: T,
    pub heater_on: bool,
    pub t_out: T,
    /// Simulated seconds.
    pub clock: f64,
}

impl<T: Scalar> ThermalState<T> {
    pub fn new(t_room: T, t_out: T) -> Self {
        Self {
            t_room,
            heater_on: false,
            t_out,
            clock: 0.0,
        }
    }
}

/// Hysteresis relay around a Fahrenheit set-point.
pub fn thermostat_command<T: Scalar>(state: &ThermalState<T>, setpoint_f: T) -> bool {
    let sp = f_to_c(setpoint_f);
    let band = lit::<T>(THERMOSTAT_BAND_C);
    if state.t_room < sp - band {
        true
    } else if state.t_room > sp + band {
        false
    } else {
        state.heater_on
    }
}

/// One explicit Euler step of the room air energy balance.
pub fn step_house<T: Scalar>(
    state: &ThermalState<T>,
    params: &HouseParams<T>,
    occupant_flows: &[T],
    heater_on: bool,
) -> Result<ThermalState<T>> {
    let p = params;
    let heater = if heater_on {
        (p.heater_temperature - state.t_room) * p.mass_flow * p.air_heat_capacity
    } else {
        T::zero()
    };
    let losses = (state.t_room - state.t_out) / p.r_eq;
    let people: T = occupant_flows.iter().copied().sum();
    let t_room = state.t_room + p.dt / (p.air_mass * p.air_heat_capacity) * (heater - losses + people);
    let t = to_f64(t_room);
    if !(GUARD_LO..=GUARD_HI).contains(&t) {
        return Err(Error::Unstable { t_room: t });
    }
    Ok(ThermalState {
        t_room,
        heater_on,
        t_out: state.t_out,
        clock: state.clock + to_f64(p.dt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_euler_step() {
        let p = HouseParams::<f64>::default();
        let s = ThermalState::new(20.0, 10.0);
        let next = step_house(&s, &p, &[], true).unwrap();
        let r = 4.329e-7 * 3600.0;
        let expected = 20.0 + 60.0 / (1470.0 * 1005.4) * (30.0 * 1.0 * 1005.4 - 10.0 / r);
        assert!((next.t_room - expected).abs() < 1e-9);
        assert_eq!(next.clock, 60.0);
        assert!(next.heater_on);
    }

    #[test]
    fn equilibrium_and_cooling() {
        let p = HouseParams::<f64>::default();
        let s = ThermalState::new(10.0, 10.0);
        assert_eq!(step_house(&s, &p, &[], false).unwrap().t_room, 10.0);
        let warm = ThermalState::new(20.0, 10.0);
        let next = step_house(&warm, &p, &[], false).unwrap();
        assert!(next.t_room < 20.0 && next.t_room > 10.0);
    }

    #[test]
    fn relaxes_like_exponential() {
        let p = HouseParams::<f64>::default();
        let tau = 1470.0 * 1005.4 * p.r_eq;
        let mut s = ThermalState::new(25.0, 10.0);
        let mut prev = 15.0;
        for k in 1..=120 {
            s = step_house(&s, &p, &[], false).unwrap();
            let gap = s.t_room - 10.0;
            assert!(gap < prev);
            prev = gap;
            let exact = 15.0 * (-(k as f64) * 60.0 / tau).exp();
            // Global Euler error is O(dt/tau) relative.
            assert!((gap - exact).abs() < 15.0 * 60.0 / tau, "step {k}: {gap} vs {exact}");
        }
    }

    #[test]
    fn occupants_warm_the_room() {
        let p = HouseParams::<f64>::default();
        let s = ThermalState::new(15.0, 15.0);
        assert!(step_house(&s, &p, &[100.0, 80.0], false).unwrap().t_room > 15.0);
    }

    #[test]
    fn instability_guard() {
        let p = HouseParams::<f64> {
            dt: 1.0e5,
            ..Default::default()
        };
        let s = ThermalState::new(20.0, 10.0);
        assert!(matches!(step_house(&s, &p, &[], true), Err(Error::Unstable { .. })));
        assert!(HouseParams::<f64> { r_eq: 0.0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn thermostat_hysteresis() {
        let mut s = ThermalState::<f64>::new(10.0, 10.0);
        assert!(thermostat_command(&s, 70.0));
        s.t_room = 30.0;
        s.heater_on = true;
        assert!(!thermostat_command(&s, 70.0));
        s.t_room = f_to_c(70.0);
        assert!(thermostat_command(&s, 70.0));
        s.heater_on = false;
        assert!(!thermostat_command(&s, 70.0));
    }

    #[test]
    fn conversions() {
        assert!((f_to_c(50.0_f64) - 10.0).abs() < 1e-12);
        assert!((c_to_f(100.0_f64) - 212.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn heater_term_positive(t in -5.0..45.0_f64) {
            let p = HouseParams::<f64>::default();
            let s = ThermalState::new(t, t);
            prop_assert!(step_house(&s, &p, &[], true).unwrap().t_room > t);
        }

        #[test]
        fn no_chattering_inside_band(sp in 60.0..85.0_f64, off in -2.4..2.4_f64, on: bool) {
            let s = ThermalState { t_room: f_to_c(sp) + off, heater_on: on, t_out: 0.0, clock: 0.0 };
            prop_assert_eq!(thermostat_command(&s, sp), on);
        }
    }
}
