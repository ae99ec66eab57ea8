use crate::activation::activation;

/// Central difference of `activation` in `z`.
///
/// Differences the tail that is below one half (using `S(z, phi) = 1 - S(z, -phi)`)
/// so saturated values keep their relative precision, and scales the step with
/// `1 / |phi|` so truncation error stays uniform in `phi`.
pub(crate) fn central_difference(z: f64, phi: f64) -> f64 {
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
