#![allow(dead_code)]

use chaosig::{
    activation, AttractorBounds, ChaoticMap, DriverConfig, PhiBounds, SpatioTemporalNeuron,
};

pub fn logistic_driver(phi_min: f64, phi_max: f64) -> DriverConfig {
    DriverConfig::new(
        ChaoticMap::logistic(4.0).unwrap(),
        0.1,
        AttractorBounds::new(0.0, 1.0).unwrap(),
        PhiBounds::new(phi_min, phi_max).unwrap(),
    )
}

pub fn teacher() -> SpatioTemporalNeuron {
    SpatioTemporalNeuron::scalar(1.3, -0.2, logistic_driver(-2.7, 3.5)).unwrap()
}

/// Central difference of the activation in `z`, taken on whichever tail is
/// below one half and with a step scaled by `1 / |phi|`.
pub fn activation_central_difference(z: f64, phi: f64) -> f64 {
    if phi == 0.0 {
        return 0.0;
    }
    let h = 1e-4 / phi.abs();
    if phi * z > 0.0 {
        -(activation(z + h, -phi) - activation(z - h, -phi)) / (2.0 * h)
    } else {
        (activation(z + h, phi) - activation(z - h, phi)) / (2.0 * h)
    }
}

/// MSE of `forward` against `target` as a function of (weights, bias).
pub fn loss_at(
    template: &SpatioTemporalNeuron,
    weights: Vec<f64>,
    bias: f64,
    inputs: &[Vec<f64>],
    target: &[f64],
) -> f64 {
    let neuron = SpatioTemporalNeuron::new(weights, bias, *template.driver_config()).unwrap();
    chaosig::mse_loss(&neuron.forward(inputs).unwrap(), target).unwrap()
}

/// Central-difference gradient of the loss, weights first then bias.
pub fn numeric_gradient(
    neuron: &SpatioTemporalNeuron,
    inputs: &[Vec<f64>],
    target: &[f64],
) -> Vec<f64> {
    let h = 1e-6;
    let w = neuron.weights().to_vec();
    let b = neuron.bias();
    let mut grad = Vec::with_capacity(w.len() + 1);
    for j in 0..w.len() {
        let mut plus = w.clone();
        let mut minus = w.clone();
        plus[j] += h;
        minus[j] -= h;
        grad.push(
            (loss_at(neuron, plus, b, inputs, target) - loss_at(neuron, minus, b, inputs, target))
                / (2.0 * h),
        );
    }
    grad.push(
        (loss_at(neuron, w.clone(), b + h, inputs, target)
            - loss_at(neuron, w, b - h, inputs, target))
            / (2.0 * h),
    );
    grad
}
