//! A single neuron whose activation steepness is driven by a chaotic map.

use serde::{Deserialize, Serialize};

use crate::activation::{activation, activation_derivative, DriverConfig, TemporalDriver};
use crate::chaos::{iterate_map, AttractorBounds, ChaoticMap};
use crate::error::{Error, Result};

/// Default value of the constant input series.
pub const DEFAULT_FLAT_VALUE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNeuron", deny_unknown_fields)]
pub struct SpatioTemporalNeuron {
    weights: Vec<f64>,
    bias: f64,
    driver: DriverConfig,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNeuron {
    weights: Vec<f64>,
    bias: f64,
    driver: DriverConfig,
}

impl TryFrom<RawNeuron> for SpatioTemporalNeuron {
    type Error = Error;

    fn try_from(raw: RawNeuron) -> Result<Self> {
        SpatioTemporalNeuron::new(raw.weights, raw.bias, raw.driver)
    }
}

impl SpatioTemporalNeuron {
    pub fn new(weights: Vec<f64>, bias: f64, driver: DriverConfig) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("weights", "at least one weight is required"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("weights", "weights must be finite"));
        }
        if !bias.is_finite() {
            return Err(Error::invalid("bias", "bias must be finite"));
        }
        driver.validate()?;
        Ok(Self {
            weights,
            bias,
            driver,
        })
    }

    /// One input, weight `w`, bias `b`.
    pub fn scalar(w: f64, b: f64, driver: DriverConfig) -> Result<Self> {
        Self::new(vec![w], b, driver)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn driver_config(&self) -> &DriverConfig {
        &self.driver
    }

    pub fn input_dim(&self) -> usize {
        self.weights.len()
    }

    /// Weighted sum `w . x + b`.
    pub fn preactivation(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + self.bias
    }

    /// The first `n` steepness values from a freshly initialized driver.
    pub fn phi_sequence(&self, n: usize) -> Result<Vec<f64>> {
        TemporalDriver::from_config(&self.driver)?.take(n)
    }

    fn check_inputs(&self, inputs: &[Vec<f64>]) -> Result<()> {
        for (index, x) in inputs.iter().enumerate() {
            if x.len() != self.weights.len() {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: self.weights.len(),
                    got: x.len(),
                });
            }
        }
        Ok(())
    }

    /// Output series; the driver restarts from its configured state on every call.
    pub fn forward(&self, inputs: &[Vec<f64>]) -> Result<Vec<f64>> {
        self.check_inputs(inputs)?;
        let phis = self.phi_sequence(inputs.len())?;
        Ok(self.forward_with(inputs, &phis))
    }

    fn forward_with(&self, inputs: &[Vec<f64>], phis: &[f64]) -> Vec<f64> {
        inputs
            .iter()
            .zip(phis)
            .map(|(x, &phi)| activation(self.preactivation(x), phi))
            .collect()
    }

    /// Output for `n` copies of the one-dimensional input `[flat_value]`.
    pub fn generate(&self, flat_value: f64, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::invalid("n", "at least one sample is required"));
        }
        self.forward(&flat_inputs(flat_value, n))
    }

    /// MSE and its gradient with respect to (weights, bias) for a fixed phi sequence.
    pub fn loss_and_gradient(
        &self,
        inputs: &[Vec<f64>],
        target: &[f64],
        phis: &[f64],
    ) -> Result<Gradient> {
        self.check_inputs(inputs)?;
        check_lengths(inputs.len(), target.len())?;
        check_lengths(inputs.len(), phis.len())?;
        if inputs.is_empty() {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }

        let n = inputs.len() as f64;
        let mut loss = 0.0;
        let mut weights = vec![0.0; self.weights.len()];
        let mut bias = 0.0;
        for ((x, &y), &phi) in inputs.iter().zip(target).zip(phis) {
            let z = self.preactivation(x);
            let s = activation(z, phi);
            let err = s - y;
            loss += err * err;
            let delta = 2.0 * err * activation_derivative(z, phi);
            for (g, xj) in weights.iter_mut().zip(x) {
                *g += delta * xj;
            }
            bias += delta;
        }
        weights.iter_mut().for_each(|g| *g /= n);
        Ok(Gradient {
            loss: loss / n,
            weights,
            bias: bias / n,
        })
    }

    /// Full-batch gradient descent on MSE over the weights and (optionally) the bias.
    pub fn train(
        &self,
        inputs: &[Vec<f64>],
        target: &[f64],
        config: &TrainConfig,
    ) -> Result<(SpatioTemporalNeuron, TrainReport)> {
        self.train_with_observer(inputs, target, config, |_| {})
    }

    /// Like [`train`](Self::train), calling `observer` once per epoch before the update.
    pub fn train_with_observer<F>(
        &self,
        inputs: &[Vec<f64>],
        target: &[f64],
        config: &TrainConfig,
        mut observer: F,
    ) -> Result<(SpatioTemporalNeuron, TrainReport)>
    where
        F: FnMut(&EpochState<'_>),
    {
        config.validate()?;
        self.check_inputs(inputs)?;
        check_lengths(inputs.len(), target.len())?;
        if inputs.is_empty() {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        let target_out_of_range = target.iter().filter(|y| !(0.0..=1.0).contains(*y)).count();

        // Every epoch sees the same phi(t): the driver is replayed from its initial state.
        let phis = self.phi_sequence(inputs.len())?;

        let mut model = self.clone();
        let mut loss_curve = Vec::with_capacity(config.max_epochs.min(1 << 20));
        for epoch in 0..config.max_epochs {
            let grad = model.loss_and_gradient(inputs, target, &phis)?;
            if !grad.loss.is_finite() {
                return Err(Error::Divergence { epoch });
            }
            observer(&EpochState {
                epoch,
                loss: grad.loss,
                phis: &phis,
                neuron: &model,
            });
            loss_curve.push(grad.loss);
            if grad.loss <= config.mse_tolerance || epoch + 1 == config.max_epochs {
                break;
            }

            for (w, g) in model.weights.iter_mut().zip(&grad.weights) {
                *w -= config.learning_rate * g;
            }
            if config.train_bias {
                model.bias -= config.learning_rate * grad.bias;
            }
            if model.weights.iter().any(|w| !w.is_finite()) || !model.bias.is_finite() {
                return Err(Error::Divergence { epoch });
            }
        }

        let report = TrainReport {
            final_mse: *loss_curve.last().expect("at least one epoch runs"),
            epochs_run: loss_curve.len(),
            loss_curve,
            target_out_of_range,
        };
        Ok((model, report))
    }
}

/// Loss and gradient at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub loss: f64,
    pub weights: Vec<f64>,
    pub bias: f64,
}

/// Snapshot handed to a training observer.
#[derive(Debug)]
pub struct EpochState<'a> {
    pub epoch: usize,
    pub loss: f64,
    pub phis: &'a [f64],
    pub neuron: &'a SpatioTemporalNeuron,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub mse_tolerance: f64,
    pub train_bias: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            max_epochs: 20_000,
            mse_tolerance: 1e-12,
            train_bias: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        // A zero rate is accepted: it evaluates the loss without moving the parameters.
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return Err(Error::invalid(
                "learning_rate",
                format!(
                    "must be finite and non-negative, got {}",
                    self.learning_rate
                ),
            ));
        }
        if self.max_epochs == 0 {
            return Err(Error::invalid("max_epochs", "must be at least 1"));
        }
        if self.mse_tolerance.is_nan() || self.mse_tolerance < 0.0 {
            return Err(Error::invalid(
                "mse_tolerance",
                format!("must be non-negative, got {}", self.mse_tolerance),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainReport {
    pub final_mse: f64,
    pub epochs_run: usize,
    pub loss_curve: Vec<f64>,
    /// Target samples outside [0, 1], which the sigmoid cannot reach.
    pub target_out_of_range: usize,
}

pub fn mse_loss(output: &[f64], target: &[f64]) -> Result<f64> {
    check_lengths(output.len(), target.len())?;
    if output.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let sum: f64 = output
        .iter()
        .zip(target)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / output.len() as f64)
}

fn check_lengths(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::LengthMismatch { left, right });
    }
    Ok(())
}

/// `n` copies of the input vector `[value]`.
pub fn flat_inputs(value: f64, n: usize) -> Vec<Vec<f64>> {
    vec![vec![value]; n]
}

/// Logistic-map orbit rescaled affinely from its own range onto `[lo, hi]`.
pub fn rescaled_orbit_target(
    map: &ChaoticMap,
    x0: f64,
    burn_in: usize,
    n: usize,
    lo: f64,
    hi: f64,
) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid(
            "target range",
            format!("need lo < hi, got [{lo}, {hi}]"),
        ));
    }
    let orbit = iterate_map(map, x0, burn_in, n)?;
    let bounds = AttractorBounds::of_samples(&orbit.samples)?;
    let width = bounds.width();
    if width <= 0.0 {
        return Ok(vec![(lo + hi) / 2.0; n]);
    }
    Ok(orbit
        .samples
        .iter()
        .map(|x| lo + (x - bounds.alpha_min) / width * (hi - lo))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activation::PhiBounds;
    use crate::chaos::ChaoticMap;

    fn driver(phi_min: f64, phi_max: f64) -> DriverConfig {
        DriverConfig::new(
            ChaoticMap::logistic(4.0).unwrap(),
            0.1,
            AttractorBounds::new(0.0, 1.0).unwrap(),
            PhiBounds::new(phi_min, phi_max).unwrap(),
        )
    }

    fn std(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        (mean, var.sqrt())
    }

    #[test]
    fn zero_weight_gives_half() {
        let neuron = SpatioTemporalNeuron::scalar(0.0, 0.0, driver(-2.7, 3.5)).unwrap();
        let inputs: Vec<Vec<f64>> = (0..50).map(|t| vec![t as f64 - 20.0]).collect();
        let out = neuron.forward(&inputs).unwrap();
        assert!(out.iter().all(|&s| s == 0.5));
    }

    #[test]
    fn narrow_band_output_statistics() {
        let neuron = SpatioTemporalNeuron::scalar(1.0, 0.0, driver(0.9, 1.1)).unwrap();
        let out = neuron.generate(1.0, 10_000).unwrap();
        let (mean, sigma) = std(&out);
        assert!((mean - activation(1.0, 1.0)).abs() < 0.005, "{mean}");
        assert!((sigma - 0.013).abs() <= 0.002, "{sigma}");
    }

    #[test]
    fn forward_is_reproducible() {
        let neuron = SpatioTemporalNeuron::scalar(1.3, -0.2, driver(-2.7, 3.5)).unwrap();
        assert_eq!(
            neuron.generate(1.0, 2000).unwrap(),
            neuron.generate(1.0, 2000).unwrap()
        );
    }

    #[test]
    fn forward_checks_dimensions() {
        let neuron = SpatioTemporalNeuron::new(vec![1.0, 2.0], 0.0, driver(0.9, 1.1)).unwrap();
        let inputs = vec![vec![1.0, 1.0], vec![1.0]];
        assert!(matches!(
            neuron.forward(&inputs),
            Err(Error::DimensionMismatch {
                index: 1,
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn generate_lengths_and_range() {
        let neuron = SpatioTemporalNeuron::scalar(1.0, 0.0, driver(-2.7, 3.5)).unwrap();
        assert_eq!(neuron.generate(1.0, 1).unwrap().len(), 1);
        assert!(neuron.generate(1.0, 0).is_err());
        let out = neuron.generate(1.0, 10_000).unwrap();
        let lo = out.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = out.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(lo < 0.15 && hi > 0.9, "[{lo}, {hi}]");
        assert!(out.iter().all(|&s| s > 0.0 && s < 1.0));
    }

    #[test]
    fn neuron_validation() {
        assert!(SpatioTemporalNeuron::new(vec![], 0.0, driver(0.9, 1.1)).is_err());
        assert!(SpatioTemporalNeuron::new(vec![f64::NAN], 0.0, driver(0.9, 1.1)).is_err());
        assert!(SpatioTemporalNeuron::new(vec![1.0], f64::INFINITY, driver(0.9, 1.1)).is_err());
    }

    #[test]
    fn model_json_shape() {
        let neuron = SpatioTemporalNeuron::scalar(1.5, -0.25, driver(0.9, 1.1)).unwrap();
        let json = serde_json::to_string(&neuron).unwrap();
        assert_eq!(
            json,
            r#"{"weights":[1.5],"bias":-0.25,"driver":{"map":{"kind":"logistic","r":4.0},"alpha0":0.1,"alpha_min":0.0,"alpha_max":1.0,"phi_min":0.9,"phi_max":1.1}}"#
        );
        let back: SpatioTemporalNeuron = serde_json::from_str(&json).unwrap();
        assert_eq!(back, neuron);
        let bad = json.replace("[1.5]", "[]");
        assert!(serde_json::from_str::<SpatioTemporalNeuron>(&bad).is_err());
    }

    #[test]
    fn mse_examples() {
        assert_eq!(mse_loss(&[0.5, 0.5], &[0.5, 0.5]).unwrap(), 0.0);
        assert_eq!(mse_loss(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert!((mse_loss(&[0.2, 0.4], &[0.0, 0.0]).unwrap() - 0.1).abs() < 1e-15);
        assert!(matches!(
            mse_loss(&[0.2], &[0.0, 0.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(mse_loss(&[], &[]).is_err());
    }

    #[test]
    fn zero_learning_rate_leaves_parameters() {
        let neuron = SpatioTemporalNeuron::scalar(0.3, 0.1, driver(0.9, 1.1)).unwrap();
        let inputs = flat_inputs(1.0, 100);
        let target = vec![0.6; 100];
        let cfg = TrainConfig {
            learning_rate: 0.0,
            max_epochs: 25,
            mse_tolerance: 0.0,
            train_bias: true,
        };
        let (trained, report) = neuron.train(&inputs, &target, &cfg).unwrap();
        assert_eq!(trained, neuron);
        assert_eq!(report.epochs_run, 25);
        assert!(report.loss_curve.iter().all(|&l| l == report.loss_curve[0]));
        assert_eq!(report.final_mse, report.loss_curve[0]);
    }

    #[test]
    fn constant_half_target_drives_preactivation_to_zero() {
        let neuron = SpatioTemporalNeuron::scalar(0.8, 0.4, driver(0.9, 1.1)).unwrap();
        let inputs = flat_inputs(1.0, 500);
        let target = vec![0.5; 500];
        let cfg = TrainConfig {
            learning_rate: 2.0,
            max_epochs: 20_000,
            mse_tolerance: 1e-10,
            train_bias: true,
        };
        let (trained, report) = neuron.train(&inputs, &target, &cfg).unwrap();
        assert!(report.final_mse < 1e-8, "{}", report.final_mse);
        assert!(trained.preactivation(&[1.0]).abs() < 1e-3);
        assert_eq!(report.final_mse, *report.loss_curve.last().unwrap());
        assert_eq!(report.epochs_run, report.loss_curve.len());
    }

    #[test]
    fn frozen_bias_is_not_updated() {
        let neuron = SpatioTemporalNeuron::scalar(0.0, 0.7, driver(0.9, 1.1)).unwrap();
        let cfg = TrainConfig {
            learning_rate: 0.5,
            max_epochs: 50,
            mse_tolerance: 0.0,
            train_bias: false,
        };
        let (trained, _) = neuron
            .train(&flat_inputs(1.0, 100), &vec![0.3; 100], &cfg)
            .unwrap();
        assert_eq!(trained.bias(), 0.7);
        assert_ne!(trained.weights()[0], 0.0);
    }

    #[test]
    fn training_replays_identical_phi_each_epoch() {
        use std::collections::hash_map::DefaultHasher;
        use std::hash::{Hash, Hasher};

        let neuron = SpatioTemporalNeuron::scalar(0.0, 0.0, driver(-2.7, 3.5)).unwrap();
        let target =
            rescaled_orbit_target(&ChaoticMap::logistic(3.9).unwrap(), 0.2, 100, 300, 0.1, 0.9)
                .unwrap();
        let cfg = TrainConfig {
            learning_rate: 0.1,
            max_epochs: 40,
            mse_tolerance: 0.0,
            train_bias: true,
        };
        let mut digests = Vec::new();
        neuron
            .train_with_observer(&flat_inputs(1.0, 300), &target, &cfg, |state| {
                let mut h = DefaultHasher::new();
                for phi in state.phis {
                    phi.to_bits().hash(&mut h);
                }
                digests.push(h.finish());
            })
            .unwrap();
        assert_eq!(digests.len(), 40);
        assert!(digests.iter().all(|&d| d == digests[0]));
    }

    #[test]
    fn divergence_is_reported() {
        // A huge step overshoots into non-finite parameters.
        let neuron = SpatioTemporalNeuron::scalar(0.0, 0.0, driver(0.9, 1.1)).unwrap();
        let cfg = TrainConfig {
            learning_rate: f64::MAX,
            max_epochs: 10,
            mse_tolerance: 0.0,
            train_bias: true,
        };
        let err = neuron
            .train(&flat_inputs(1e10, 10), &[0.9; 10], &cfg)
            .unwrap_err();
        assert!(matches!(err, Error::Divergence { epoch: 0 }), "{err:?}");
    }

    #[test]
    fn train_config_validation() {
        let invalid = [
            TrainConfig {
                max_epochs: 0,
                ..Default::default()
            },
            TrainConfig {
                learning_rate: -1.0,
                ..Default::default()
            },
            TrainConfig {
                mse_tolerance: f64::NAN,
                ..Default::default()
            },
        ];
        for cfg in invalid {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn out_of_range_targets_are_counted() {
        let neuron = SpatioTemporalNeuron::scalar(0.0, 0.0, driver(0.9, 1.1)).unwrap();
        let cfg = TrainConfig {
            max_epochs: 2,
            ..TrainConfig::default()
        };
        let (_, report) = neuron
            .train(&flat_inputs(1.0, 4), &[0.5, 1.5, -0.1, 0.2], &cfg)
            .unwrap();
        assert_eq!(report.target_out_of_range, 2);
    }

    #[test]
    fn rescaled_target_spans_requested_range() {
        let target = rescaled_orbit_target(
            &ChaoticMap::logistic(4.0).unwrap(),
            0.1,
            1000,
            5000,
            0.1,
            0.9,
        )
        .unwrap();
        let lo = target.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = target.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!((lo - 0.1).abs() < 1e-12 && (hi - 0.9).abs() < 1e-12);
    }
}
