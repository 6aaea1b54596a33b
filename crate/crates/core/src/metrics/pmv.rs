use serde::{Deserialize, Serialize};

use crate::scalar::{lit, to_f64, Scalar};
use crate::{Error, Result};

pub const PMV_MAX_ITERATIONS: usize = 150;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Humidity<T> {
    /// Fraction in [0, 1].
    Relative(T),
    /// Partial water vapour pressure in Pa.
    VaporPressure(T),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmvInputs<T> {
    pub air_temperature: T,
    pub mean_radiant_temperature: T,
    pub air_velocity: T,
    pub humidity: Humidity<T>,
    pub metabolic_rate: T,
    pub clothing: T,
}

impl<T: Scalar> PmvInputs<T> {
    /// Still air at 50 % relative humidity with radiant temperature equal to air temperature.
    pub fn indoor(air_temperature: T, metabolic_rate: T, clothing: T) -> Self {
        Self {
            air_temperature,
            mean_radiant_temperature: air_temperature,
            air_velocity: lit(0.1),
            humidity: Humidity::Relative(lit(0.5)),
            metabolic_rate,
            clothing,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |what, v: T, lo: f64, hi: f64| {
            let x = to_f64(v);
            if !x.is_finite() {
                return Err(Error::NonFinite(what));
            }
            if x < lo || x > hi {
                return Err(Error::range(what, x, lo, hi));
            }
            Ok(())
        };
        check("air temperature", self.air_temperature, -10.0, 50.0)?;
        check("mean radiant temperature", self.mean_radiant_temperature, -10.0, 50.0)?;
        check("air velocity", self.air_velocity, 0.0, 2.0)?;
        check("metabolic rate", self.metabolic_rate, 0.5, 5.0)?;
        check("clothing", self.clothing, 0.0, 2.0)?;
        match self.humidity {
            Humidity::Relative(rh) => check("relative humidity", rh, 0.0, 1.0),
            Humidity::VaporPressure(pa) => check("vapour pressure", pa, 0.0, 10_000.0),
        }
    }

    fn vapor_pressure(&self) -> T {
        match self.humidity {
            Humidity::VaporPressure(pa) => pa,
            Humidity::Relative(rh) => {
                let ta = self.air_temperature;
                rh * lit(1000.0) * (lit::<T>(16.6536) - lit::<T>(4030.183) / (ta + lit(235.0))).exp()
            }
        }
    }
}

/// Fanger's predicted mean vote, clamped to [-3, 3].
pub fn pmv<T: Scalar>(inputs: &PmvInputs<T>) -> Result<T> {
    inputs.validate()?;
    let l = lit::<T>;
    let ta = inputs.air_temperature;
    let tr = inputs.mean_radiant_temperature;
    let pa = inputs.vapor_pressure();
    let icl = l(0.155) * inputs.clothing;
    let m = inputs.metabolic_rate * l(58.15);
    let mw = m;
    let fcl = if icl <= l(0.078) {
        T::one() + l(1.29) * icl
    } else {
        l(1.05) + l(0.645) * icl
    };
    let hcf = l(12.1) * inputs.air_velocity.sqrt();
    let taa = ta + l(273.0);
    let tra = tr + l(273.0);
    let tcla = taa + (l(35.5) - ta) / (l(3.5) * icl + l(0.1));

    let p1 = icl * fcl;
    let p2 = p1 * l(3.96);
    let p3 = p1 * l(100.0);
    let p4 = p1 * taa;
    let p5 = l(308.7) - l(0.028) * mw + p2 * (tra / l(100.0)).powi(4);

    // 1e-5 degC in units of 100 K, loosened to a few ulps for narrow scalars.
    let tol = l(1e-7).max(T::epsilon() * l(16.0));
    let mut xn = tcla / l(100.0);
    let mut xf = tcla / l(50.0);
    let mut hc = hcf;
    let mut n = 0;
    while (xn - xf).abs() > tol {
        xf = (xf + xn) / l(2.0);
        let hcn = l(2.38) * (l(100.0) * xf - taa).abs().powf(l(0.25));
        hc = hcf.max(hcn);
        xn = (p5 + p4 * hc - p2 * xf.powi(4)) / (l(100.0) + p3 * hc);
        n += 1;
        if n > PMV_MAX_ITERATIONS {
            return Err(Error::PmvNonConvergence {
                inputs: format!("{inputs:?}"),
            });
        }
    }
    let tcl = l(100.0) * xn - l(273.0);

    let hl1 = l(3.05e-3) * (l(5733.0) - l(6.99) * mw - pa);
    let hl2 = if mw > l(58.15) { l(0.42) * (mw - l(58.15)) } else { T::zero() };
    let hl3 = l(1.7e-5) * m * (l(5867.0) - pa);
    let hl4 = l(0.0014) * m * (l(34.0) - ta);
    let hl5 = l(3.96) * fcl * (xn.powi(4) - (tra / l(100.0)).powi(4));
    let hl6 = fcl * hc * (tcl - ta);
    let ts = l(0.303) * (l(-0.036) * m).exp() + l(0.028);
    let v = ts * (mw - hl1 - hl2 - hl3 - hl4 - hl5 - hl6);
    if !v.is_finite() {
        return Err(Error::NonFinite("pmv"));
    }
    Ok(v.max(l(-3.0)).min(l(3.0)))
}
