//! Summary statistics for generated series.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::activation::{DriverConfig, PhiBounds};
use crate::chaos::{lyapunov_exponent, ChaoticMap};
use crate::error::{Error, Result};
use crate::neuron::SpatioTemporalNeuron;

/// Lag range used when none is given.
pub const DEFAULT_MAX_LAG: usize = 50;

const MIN_VARIANCE: f64 = 1e-24;

/// Mean and population variance by the corrected two-pass formula.
fn mean_and_variance(series: &[f64]) -> (f64, f64) {
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let (sum_sq, sum) = series.iter().fold((0.0, 0.0), |(sq, s), &x| {
        let d = x - mean;
        (sq + d * d, s + d)
    });
    // The second term cancels the rounding error left in `mean`.
    (mean, (sum_sq - sum * sum / n) / n)
}

pub fn mean(series: &[f64]) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    Ok(mean_and_variance(series).0)
}

/// Population standard deviation (divides by `n`).
pub fn std_dev(series: &[f64]) -> Result<f64> {
    if series.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: series.len(),
        });
    }
    Ok(mean_and_variance(series).1.max(0.0).sqrt())
}

/// Biased sample autocorrelation for lags `0..=max_lag`, normalized by the lag-0 sum.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if max_lag == 0 {
        return Err(Error::invalid("max_lag", "must be at least 1"));
    }
    if max_lag >= n {
        return Err(Error::TooShort {
            needed: max_lag + 1,
            got: n,
        });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let denom: f64 = centered.iter().map(|d| d * d).sum();
    let variance = denom / n as f64;
    if variance.is_nan() || variance <= MIN_VARIANCE {
        return Err(Error::ZeroVariance { variance });
    }

    let mut rho = Vec::with_capacity(max_lag + 1);
    rho.push(1.0);
    for lag in 1..=max_lag {
        let num: f64 = centered[..n - lag]
            .iter()
            .zip(&centered[lag..])
            .map(|(a, b)| a * b)
            .sum();
        rho.push((num / denom).clamp(-1.0, 1.0));
    }
    Ok(rho)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub lyapunov: Option<f64>,
    pub std_dev: f64,
    pub mean: f64,
    pub autocorrelation: Vec<f64>,
    pub n_samples: usize,
}

/// Standard deviation, mean, autocorrelation and (when `map` is given) the Lyapunov exponent.
///
/// Every component is attempted; if more than one fails, all failures are returned together.
pub fn diagnose(
    series: &[f64],
    map: Option<&ChaoticMap>,
    max_lag: usize,
) -> Result<DiagnosticsReport> {
    let sigma = std_dev(series);
    let rho = autocorrelation(series, max_lag);
    let lyapunov = map.map(|m| lyapunov_exponent(series, m)).transpose();

    match (sigma, rho, lyapunov) {
        (Ok(std_dev), Ok(autocorrelation), Ok(lyapunov)) => Ok(DiagnosticsReport {
            lyapunov,
            std_dev,
            mean: mean_and_variance(series).0,
            autocorrelation,
            n_samples: series.len(),
        }),
        (sigma, rho, lyapunov) => {
            let mut errors: Vec<Error> = [sigma.err(), rho.err(), lyapunov.err()]
                .into_iter()
                .flatten()
                .collect();
            if errors.len() == 1 {
                Err(errors.pop().unwrap())
            } else {
                Err(Error::Multiple(errors))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaSweepRow {
    pub delta_phi: f64,
    pub phi_center: f64,
    pub sigma: f64,
}

/// Output standard deviation of a `w = 1, b = 0` neuron on flat input for each phi width.
///
/// Deltas are evaluated in parallel; rows are returned sorted by `delta_phi`.
pub fn sigma_sweep(
    phi_center: f64,
    deltas: &[f64],
    template: &DriverConfig,
    flat_value: f64,
    n: usize,
) -> Result<Vec<SigmaSweepRow>> {
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    if !phi_center.is_finite() {
        return Err(Error::invalid("phi_center", "must be finite"));
    }
    if let Some(&bad) = deltas.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(Error::invalid(
            "delta",
            format!("widths must be positive, got {bad}"),
        ));
    }
    template.validate()?;

    let mut rows = deltas
        .par_iter()
        .map(|&delta_phi| {
            let phi = PhiBounds::centered(phi_center, delta_phi)?;
            let neuron = SpatioTemporalNeuron::scalar(1.0, 0.0, template.with_phi(phi))?;
            let output = neuron.generate(flat_value, n)?;
            Ok(SigmaSweepRow {
                delta_phi,
                phi_center,
                sigma: std_dev(&output)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.delta_phi.total_cmp(&b.delta_phi));
    Ok(rows)
}

/// Least-squares line through the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginFit {
    pub slope: f64,
    /// Coefficient of determination against the mean of `y`.
    pub r_squared: f64,
}

pub fn fit_through_origin(points: &[(f64, f64)]) -> Result<OriginFit> {
    if points.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: points.len(),
        });
    }
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("points", "all x values are zero"));
    }
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    let slope = sxy / sxx;
    let y_mean = points.iter().map(|(_, y)| y).sum::<f64>() / points.len() as f64;
    let ss_res: f64 = points.iter().map(|(x, y)| (y - slope * x).powi(2)).sum();
    let ss_tot: f64 = points.iter().map(|(_, y)| (y - y_mean).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        f64::NEG_INFINITY
    };
    Ok(OriginFit { slope, r_squared })
}
