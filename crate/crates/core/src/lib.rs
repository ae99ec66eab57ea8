//! Sigmoid neurons whose steepness is modulated at every time step by a chaotic map.
//!
//! * [`chaos`]: logistic and cubic maps, orbits, attractor bounds, bifurcation
//!   scans and the Lyapunov exponent.
//! * [`activation`]: the time-varying sigmoid, its derivative and the
//!   [`TemporalDriver`](activation::TemporalDriver) producing `phi(t)`.
//! * [`neuron`]: forward generation and full-batch gradient-descent training.
//! * [`diagnostics`]: standard deviation, autocorrelation and phi-width sweeps.
//! * [`io`]: CSV/JSON formats and atomic file output.

pub mod activation;
pub mod chaos;
pub mod diagnostics;
pub mod error;
pub mod io;
pub mod neuron;

#[cfg(test)]
mod testing;

pub use activation::{
    activation, activation_derivative, normalize_phi, to_affine, DriverConfig, PhiBounds,
    TemporalAffine, TemporalDriver,
};
pub use chaos::{
    bifurcation_scan, estimate_alpha_bounds, iterate_map, lyapunov_exponent, AttractorBounds,
    BifurcationPoint, ChaoticMap, MapKind, Orbit, ScanSpec,
};
pub use diagnostics::{
    autocorrelation, diagnose, sigma_sweep, std_dev, DiagnosticsReport, SigmaSweepRow,
};
pub use error::{Error, Result};
pub use neuron::{mse_loss, SpatioTemporalNeuron, TrainConfig, TrainReport};
