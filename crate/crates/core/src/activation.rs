//! Sigmoid with a time-varying steepness and the driver that supplies it.
//!
//! The steepness `phi(t)` is an affine image of a chaotic map state `alpha(t)`,
//! rescaled so that the attractor interval `[alpha_min, alpha_max]` lands on
//! `[phi_min, phi_max]`.

use serde::{Deserialize, Serialize};

use crate::chaos::{iterate_map, AttractorBounds, ChaoticMap, DEFAULT_BURN_IN};
use crate::error::{Error, Result};

const MIN_BOUNDS_WIDTH: f64 = 1e-12;

/// Logistic sigmoid of `phi * z`.
///
/// Always in the open interval (0, 1) for finite inputs; evaluated through
/// `exp(-|phi z|)` so large products saturate instead of overflowing.
#[inline]
pub fn activation(z: f64, phi: f64) -> f64 {
    let u = phi * z;
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// Derivative of [`activation`] with respect to `z`: `phi s (1 - s)`.
///
/// `s (1 - s)` is evaluated as `e / (1 + e)^2` with `e = exp(-|phi z|)`, which
/// keeps full relative precision where `1 - s` would cancel.
#[inline]
pub fn activation_derivative(z: f64, phi: f64) -> f64 {
    let e = (-(phi * z).abs()).exp();
    let denom = 1.0 + e;
    phi * (e / (denom * denom))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiBounds {
    pub phi_min: f64,
    pub phi_max: f64,
}

impl PhiBounds {
    pub fn new(phi_min: f64, phi_max: f64) -> Result<Self> {
        if !phi_min.is_finite() || !phi_max.is_finite() {
            return Err(Error::invalid("phi bounds", "bounds must be finite"));
        }
        if phi_min > phi_max {
            return Err(Error::invalid(
                "phi bounds",
                format!("phi_min {phi_min} exceeds phi_max {phi_max}"),
            ));
        }
        Ok(Self { phi_min, phi_max })
    }

    /// Bounds of width `delta` centred on `center`.
    pub fn centered(center: f64, delta: f64) -> Result<Self> {
        Self::new(center - delta / 2.0, center + delta / 2.0)
    }

    pub fn width(&self) -> f64 {
        self.phi_max - self.phi_min
    }

    pub fn contains(&self, phi: f64) -> bool {
        phi >= self.phi_min && phi <= self.phi_max
    }
}

fn check_width(bounds: &AttractorBounds) -> Result<f64> {
    let width = bounds.width();
    if width.is_nan() || width < MIN_BOUNDS_WIDTH {
        return Err(Error::DegenerateBounds { width });
    }
    Ok(width)
}

/// Linearly maps `alpha` from the attractor interval onto the phi interval.
///
/// Values of `alpha` outside the attractor interval are clamped first.
pub fn normalize_phi(alpha: f64, bounds: &AttractorBounds, phi: &PhiBounds) -> Result<f64> {
    let width = check_width(bounds)?;
    let alpha = alpha.clamp(bounds.alpha_min, bounds.alpha_max);
    let fraction = (alpha - bounds.alpha_min) / width;
    let value = phi.phi_min + fraction * phi.width();
    // Rounding can nudge the upper endpoint past phi_max.
    Ok(value.clamp(phi.phi_min, phi.phi_max))
}

/// The same normalization written as `phi0 + k alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalAffine {
    pub phi0: f64,
    pub k: f64,
}

impl TemporalAffine {
    pub fn eval(&self, alpha: f64) -> f64 {
        self.phi0 + self.k * alpha
    }
}

pub fn to_affine(bounds: &AttractorBounds, phi: &PhiBounds) -> Result<TemporalAffine> {
    let width = check_width(bounds)?;
    let k = phi.width() / width;
    Ok(TemporalAffine {
        phi0: phi.phi_min - k * bounds.alpha_min,
        k,
    })
}

/// Serializable description of a driver: map, starting state and both intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriverConfig {
    pub map: ChaoticMap,
    pub alpha0: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub phi_min: f64,
    pub phi_max: f64,
}

impl DriverConfig {
    pub fn new(map: ChaoticMap, alpha0: f64, bounds: AttractorBounds, phi: PhiBounds) -> Self {
        Self {
            map,
            alpha0,
            alpha_min: bounds.alpha_min,
            alpha_max: bounds.alpha_max,
            phi_min: phi.phi_min,
            phi_max: phi.phi_max,
        }
    }

    pub fn attractor_bounds(&self) -> Result<AttractorBounds> {
        AttractorBounds::new(self.alpha_min, self.alpha_max)
    }

    pub fn phi_bounds(&self) -> Result<PhiBounds> {
        PhiBounds::new(self.phi_min, self.phi_max)
    }

    pub fn with_phi(mut self, phi: PhiBounds) -> Self {
        self.phi_min = phi.phi_min;
        self.phi_max = phi.phi_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bounds = self.attractor_bounds()?;
        check_width(&bounds)?;
        self.phi_bounds()?;
        // Starting state must be admissible for the map.
        self.map.step(self.alpha0)?;
        Ok(())
    }
}

/// Stateful source of the `phi(t)` sequence.
///
/// Cloning snapshots the state, so a clone replays the same sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalDriver {
    map: ChaoticMap,
    alpha: f64,
    bounds: AttractorBounds,
    phi: PhiBounds,
    clamped: u64,
}

impl TemporalDriver {
    /// Builds a driver and discards the default 1000 transient iterations.
    pub fn from_config(config: &DriverConfig) -> Result<Self> {
        Self::with_burn_in(config, DEFAULT_BURN_IN)
    }

    pub fn with_burn_in(config: &DriverConfig, burn_in: usize) -> Result<Self> {
        config.validate()?;
        let orbit = iterate_map(&config.map, config.alpha0, burn_in, 1)?;
        Ok(Self {
            map: config.map,
            alpha: orbit.samples[0],
            bounds: config.attractor_bounds()?,
            phi: config.phi_bounds()?,
            clamped: 0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn map(&self) -> &ChaoticMap {
        &self.map
    }

    pub fn attractor_bounds(&self) -> &AttractorBounds {
        &self.bounds
    }

    pub fn phi_bounds(&self) -> &PhiBounds {
        &self.phi
    }

    /// Number of steps whose state fell outside the attractor interval and was clamped.
    pub fn clamped_steps(&self) -> u64 {
        self.clamped
    }

    /// Advances the map one step and returns phi for the new state.
    pub fn step(&mut self) -> Result<f64> {
        let next = self.map.step(self.alpha)?;
        if !next.is_finite() || next.abs() > crate::chaos::DIVERGENCE_LIMIT {
            return Err(Error::Overflow {
                step: 1,
                value: next,
            });
        }
        self.alpha = next;
        if !self.bounds.contains(next) {
            self.clamped += 1;
        }
        normalize_phi(next, &self.bounds, &self.phi)
    }

    /// The next `n` phi values.
    pub fn take(&mut self, n: usize) -> Result<Vec<f64>> {
        (0..n).map(|_| self.step()).collect()
    }
}
