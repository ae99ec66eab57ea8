//! One-dimensional chaotic maps and the measurements taken on their orbits.
//!
//! Two maps are supported: the logistic map `x -> r x (1 - x)` on `[0, 1]` and
//! the odd-symmetric cubic map `x -> r x - x^3`. Every operation that iterates
//! a map takes the initial condition explicitly, since the cubic map can settle
//! into either sign basin depending on where it starts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Transient iterations discarded before measuring an attractor.
pub const DEFAULT_BURN_IN: usize = 1000;
/// Retained iterations used for bound estimation.
pub const DEFAULT_SAMPLES: usize = 100_000;
/// Default initial condition; avoids the logistic fixed point 0 and critical point 0.5.
pub const DEFAULT_X0: f64 = 0.1;
/// Iterates with magnitude above this are treated as divergence.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

const DERIVATIVE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Logistic,
    Cubic,
}

impl MapKind {
    /// Largest admissible growth parameter.
    pub fn r_max(self) -> f64 {
        match self {
            MapKind::Logistic => 4.0,
            MapKind::Cubic => 3.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MapKind::Logistic => "logistic",
            MapKind::Cubic => "cubic",
        }
    }

    pub fn validate_r(self, r: f64) -> Result<()> {
        if !(r.is_finite() && r > 0.0 && r <= self.r_max()) {
            return Err(Error::invalid(
                "r",
                format!(
                    "{} map requires 0 < r <= {}, got {r}",
                    self.name(),
                    self.r_max()
                ),
            ));
        }
        Ok(())
    }
}

impl std::str::FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "logistic" => Ok(MapKind::Logistic),
            "cubic" => Ok(MapKind::Cubic),
            other => Err(Error::invalid(
                "map",
                format!("unknown map kind `{other}` (expected logistic or cubic)"),
            )),
        }
    }
}

impl std::fmt::Display for MapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// An iterated map with a validated growth parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMap", deny_unknown_fields)]
pub struct ChaoticMap {
    kind: MapKind,
    r: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    kind: MapKind,
    r: f64,
}

impl TryFrom<RawMap> for ChaoticMap {
    type Error = Error;

    fn try_from(raw: RawMap) -> Result<Self> {
        ChaoticMap::new(raw.kind, raw.r)
    }
}

impl ChaoticMap {
    pub fn new(kind: MapKind, r: f64) -> Result<Self> {
        kind.validate_r(r)?;
        Ok(Self { kind, r })
    }

    pub fn logistic(r: f64) -> Result<Self> {
        Self::new(MapKind::Logistic, r)
    }

    pub fn cubic(r: f64) -> Result<Self> {
        Self::new(MapKind::Cubic, r)
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    fn check_state(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("state {x} is not finite")));
        }
        if self.kind == MapKind::Logistic && !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!(
                "logistic map state {x} lies outside [0, 1]"
            )));
        }
        Ok(())
    }

    /// Applies the map once.
    pub fn step(&self, x: f64) -> Result<f64> {
        self.check_state(x)?;
        Ok(self.apply(x))
    }

    #[inline]
    fn apply(&self, x: f64) -> f64 {
        match self.kind {
            // x(1-x) is rounded first so the product never exceeds 1 for r <= 4.
            MapKind::Logistic => self.r * (x * (1.0 - x)),
            MapKind::Cubic => self.r * x - x * x * x,
        }
    }

    /// Analytic derivative `f'(x)`.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("state {x} is not finite")));
        }
        Ok(self.apply_derivative(x))
    }

    #[inline]
    fn apply_derivative(&self, x: f64) -> f64 {
        match self.kind {
            MapKind::Logistic => self.r * (1.0 - 2.0 * x),
            MapKind::Cubic => self.r - 3.0 * x * x,
        }
    }
}

/// Retained iterates of a map after a discarded transient.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub x0: f64,
    pub burn_in: usize,
    pub samples: Vec<f64>,
}

/// Iterates `map` from `x0`, drops `burn_in` iterates and keeps the next `n`.
///
/// The first retained sample is `x0` itself when `burn_in == 0`.
pub fn iterate_map(map: &ChaoticMap, x0: f64, burn_in: usize, n: usize) -> Result<Orbit> {
    if n == 0 {
        return Err(Error::invalid("n", "at least one sample is required"));
    }
    map.check_state(x0)?;

    let mut samples = Vec::with_capacity(n);
    let mut x = x0;
    let total = burn_in + n;
    for step in 0..total {
        if step >= burn_in {
            samples.push(x);
        }
        if step + 1 < total {
            x = map.apply(x);
            if !x.is_finite() || x.abs() > DIVERGENCE_LIMIT {
                return Err(Error::Overflow {
                    step: step + 1,
                    value: x,
                });
            }
        }
    }

    Ok(Orbit {
        x0,
        burn_in,
        samples,
    })
}

/// Extremes of a map's post-transient orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttractorBounds {
    pub alpha_min: f64,
    pub alpha_max: f64,
}

impl AttractorBounds {
    pub fn new(alpha_min: f64, alpha_max: f64) -> Result<Self> {
        if !alpha_min.is_finite() || !alpha_max.is_finite() {
            return Err(Error::invalid("alpha bounds", "bounds must be finite"));
        }
        if alpha_min > alpha_max {
            return Err(Error::invalid(
                "alpha bounds",
                format!("alpha_min {alpha_min} exceeds alpha_max {alpha_max}"),
            ));
        }
        Ok(Self {
            alpha_min,
            alpha_max,
        })
    }

    pub fn width(&self) -> f64 {
        self.alpha_max - self.alpha_min
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.alpha_min && x <= self.alpha_max
    }

    /// Smallest interval containing every sample.
    pub fn of_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        let (lo, hi) = samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        Self::new(lo, hi)
    }
}

pub fn estimate_alpha_bounds(
    map: &ChaoticMap,
    x0: f64,
    burn_in: usize,
    n: usize,
) -> Result<AttractorBounds> {
    let orbit = iterate_map(map, x0, burn_in, n)?;
    AttractorBounds::of_samples(&orbit.samples)
}

/// Bounds obtained from each of several initial conditions.
///
/// Useful for the cubic map, whose attractor depends on the starting basin.
pub fn bounds_by_seed(
    map: &ChaoticMap,
    seeds: &[f64],
    burn_in: usize,
    n: usize,
) -> Vec<(f64, Result<AttractorBounds>)> {
    seeds
        .iter()
        .map(|&x0| (x0, estimate_alpha_bounds(map, x0, burn_in, n)))
        .collect()
}

/// Parameters of a bifurcation scan over a uniform grid of growth parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub kind: MapKind,
    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
    pub x0: f64,
    pub burn_in: usize,
    pub samples_per_r: usize,
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min.is_finite() && self.r_max.is_finite() && self.r_min < self.r_max) {
            return Err(Error::invalid(
                "r range",
                format!("need r_min < r_max, got [{}, {}]", self.r_min, self.r_max),
            ));
        }
        self.kind.validate_r(self.r_min)?;
        self.kind.validate_r(self.r_max)?;
        if self.r_steps < 2 {
            return Err(Error::invalid(
                "r_steps",
                "at least 2 grid points are required",
            ));
        }
        if self.samples_per_r == 0 {
            return Err(Error::invalid("samples_per_r", "must be at least 1"));
        }
        Ok(())
    }

    /// The `i`-th grid value; endpoints are hit exactly.
    pub fn r_at(&self, i: usize) -> f64 {
        if i + 1 == self.r_steps {
            self.r_max
        } else {
            self.r_min + (self.r_max - self.r_min) * i as f64 / (self.r_steps - 1) as f64
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.r_steps).map(|i| self.r_at(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationPoint {
    pub r: f64,
    pub x: f64,
}

/// Samples the attractor at each grid value of `r`.
///
/// Grid values are evaluated in parallel; rows come back ordered by `r`, with
/// `samples_per_r` consecutive rows per grid value.
pub fn bifurcation_scan(spec: &ScanSpec) -> Result<Vec<BifurcationPoint>> {
    spec.validate()?;
    let columns: Vec<Result<Vec<f64>>> = (0..spec.r_steps)
        .into_par_iter()
        .map(|i| {
            let r = spec.r_at(i);
            ChaoticMap::new(spec.kind, r)
                .and_then(|map| iterate_map(&map, spec.x0, spec.burn_in, spec.samples_per_r))
                .map(|orbit| orbit.samples)
                .map_err(|e| Error::AtParameter {
                    r,
                    source: Box::new(e),
                })
        })
        .collect();

    let mut rows = Vec::with_capacity(spec.r_steps * spec.samples_per_r);
    for (i, column) in columns.into_iter().enumerate() {
        let r = spec.r_at(i);
        rows.extend(column?.into_iter().map(|x| BifurcationPoint { r, x }));
    }
    Ok(rows)
}

/// Mean of `ln |f'(x_i)|` over the samples.
pub fn lyapunov_exponent(samples: &[f64], map: &ChaoticMap) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let mut sum = 0.0;
    for (index, &x) in samples.iter().enumerate() {
        let slope = map.derivative(x)?.abs();
        if slope < DERIVATIVE_FLOOR {
            return Err(Error::Singularity { index, value: x });
        }
        sum += slope.ln();
    }
    Ok(sum / samples.len() as f64)
}
