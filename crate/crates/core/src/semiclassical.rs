//! Two-mode squeezed vacuum statistics and the Hawking temperature map.
//!
//! Replacing the black-hole mode by a classical amplitude turns each slice
//! into a two-mode squeezer, `(1/cosh r) Σ tanh^m r |m⟩_b |m⟩_c`, whose
//! single-mode marginals are thermal with Boltzmann factor `tanh² r`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SqueezingParameter(f64);

impl SqueezingParameter {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r >= 0.0 {
            Ok(Self(r))
        } else {
            Err(Error::InvalidParameter {
                name: "r",
                requirement: "finite and non-negative",
                value: r,
            })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

pub const DEFAULT_M_MAX: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSpectrum {
    pub probabilities: Vec<f64>,
    /// `sinh² r`, the mean of the untruncated distribution.
    pub mean_occupation: f64,
    /// Mass beyond `m_max`, `tanh^{2(m_max+1)} r`.
    pub tail_mass: f64,
}

impl ThermalSpectrum {
    /// `Σ m p_m` over the retained terms.
    pub fn truncated_mean(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(m, p)| m as f64 * p)
            .sum()
    }
}

/// `p_m = tanh^{2m} r / cosh² r` for `m = 0..=m_max`.
pub fn squeezed_distribution(r: SqueezingParameter, m_max: usize) -> ThermalSpectrum {
    let r = r.get();
    let ratio = r.tanh().powi(2);
    let first = 1.0 / r.cosh().powi(2);
    let mut probabilities = Vec::with_capacity(m_max + 1);
    let mut p = first;
    for _ in 0..=m_max {
        probabilities.push(p);
        p *= ratio;
    }
    ThermalSpectrum {
        probabilities,
        mean_occupation: r.sinh().powi(2),
        tail_mass: ratio.powi(m_max as i32 + 1),
    }
}

/// How to read `tanh⁻¹` in `T = ω / (2 ln tanh⁻¹(r t))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TemperatureReading {
    /// `1 / tanh`, giving `T = ω / (2 ln coth(r t))` and `tanh²(r t) = e^{−ω/T}`.
    #[default]
    Reciprocal,
    /// The inverse function `artanh`, defined for `r t ∈ (0, 1)`. Negative
    /// for `r t < tanh 1` and singular at `r t = tanh 1`.
    InverseFunction,
}

/// Hawking temperature for cumulative squeezing `r · t` at frequency `omega`.
pub fn hawking_temperature(
    r: SqueezingParameter,
    t: f64,
    omega: f64,
    reading: TemperatureReading,
) -> Result<f64> {
    let x = r.get() * t;
    match reading {
        TemperatureReading::Reciprocal => {
            if x.is_nan() || x <= 0.0 {
                return Err(Error::OutOfDomain {
                    value: x,
                    domain: "r t > 0",
                });
            }
            // ln coth x = 2 artanh(e^{−2x}), finite for large x
            Ok(omega / (4.0 * (-2.0 * x).exp().atanh()))
        }
        TemperatureReading::InverseFunction => {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::OutOfDomain {
                    value: x,
                    domain: "0 < r t < 1",
                });
            }
            let denom = 2.0 * x.atanh().ln();
            // artanh(r t) = 1 to round-off: the formula has a pole there
            if denom.abs() < 1e-12 {
                return Err(Error::OutOfDomain {
                    value: x,
                    domain: "r t != tanh 1",
                });
            }
            Ok(omega / denom)
        }
    }
}

/// `M = 1 / (8π T)` in units `ħ = c = G = k = 1`.
pub fn mass_from_temperature(temperature: f64) -> Result<f64> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "temperature",
            requirement: "positive",
            value: temperature,
        });
    }
    Ok(1.0 / (8.0 * PI * temperature))
}

pub fn temperature_from_mass(mass: f64) -> Result<f64> {
    if mass.is_nan() || mass <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "mass",
            requirement: "positive",
            value: mass,
        });
    }
    Ok(1.0 / (8.0 * PI * mass))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(r: f64) -> SqueezingParameter {
        SqueezingParameter::new(r).unwrap()
    }

    #[test]
    fn unsqueezed_is_vacuum() {
        let s = squeezed_distribution(sq(0.0), 10);
        assert_eq!(s.probabilities[0], 1.0);
        assert!(s.probabilities[1..].iter().all(|&p| p == 0.0));
        assert_eq!(s.tail_mass, 0.0);
        assert_eq!(s.mean_occupation, 0.0);
    }

    #[test]
    fn first_moment() {
        let s = squeezed_distribution(sq(0.5), 200);
        assert!((s.truncated_mean() - 0.5f64.sinh().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn normalization_with_tail() {
        for r in [0.1, 0.5, 1.0, 2.0, 3.0] {
            let s = squeezed_distribution(sq(r), DEFAULT_M_MAX);
            let total: f64 = s.probabilities.iter().sum::<f64>() + s.tail_mass;
            assert!((total - 1.0).abs() < 1e-14, "r={r}: {total}");
        }
    }

    #[test]
    fn reciprocal_limits() {
        let w = 1.0;
        let hot = hawking_temperature(sq(1.0), 40.0, w, TemperatureReading::Reciprocal).unwrap();
        assert!(hot > 1e30);
        let cold = hawking_temperature(sq(1.0), 1e-6, w, TemperatureReading::Reciprocal).unwrap();
        assert!(cold > 0.0 && cold < 0.05);
        assert!(hawking_temperature(sq(0.0), 1.0, w, TemperatureReading::Reciprocal).is_err());
    }

    #[test]
    fn thermality_at_half() {
        let t = hawking_temperature(sq(0.5), 1.0, 1.0, TemperatureReading::Reciprocal).unwrap();
        let s = squeezed_distribution(sq(0.5), 20);
        for w in s.probabilities.windows(2) {
            assert!((w[1] / w[0] - (-1.0 / t).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn inverse_function_reading() {
        let x: f64 = 0.9;
        let t =
            hawking_temperature(sq(0.9), 1.0, 2.0, TemperatureReading::InverseFunction).unwrap();
        assert!((t - 2.0 / (2.0 * x.atanh().ln())).abs() < 1e-15);
        assert!(
            hawking_temperature(sq(1.5), 1.0, 1.0, TemperatureReading::InverseFunction).is_err()
        );
        let singular = 1f64.tanh();
        assert!(
            hawking_temperature(sq(singular), 1.0, 1.0, TemperatureReading::InverseFunction)
                .is_err()
        );
    }

    #[test]
    fn mass_map() {
        assert!((mass_from_temperature(1.0 / (8.0 * PI)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(mass_from_temperature(f64::INFINITY).unwrap(), 0.0);
        assert!(mass_from_temperature(0.0).is_err());
        assert!(mass_from_temperature(-1.0).is_err());
        let m = 30.0;
        let back = mass_from_temperature(temperature_from_mass(m).unwrap()).unwrap();
        assert!((back - m).abs() <= 1e-14 * m);
    }

    #[test]
    fn rejects_negative_squeezing() {
        assert!(SqueezingParameter::new(-0.1).is_err());
        assert!(SqueezingParameter::new(f64::NAN).is_err());
    }
}
