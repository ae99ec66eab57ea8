//! Published attractor bounds used as reference rows.

/// `(r, alpha_min, alpha_max)` for the logistic map.
pub const LOGISTIC_BOUNDS: [(f64, f64, f64); 6] = [
    (3.5, 0.382, 0.875),
    (3.6, 0.333, 0.894),
    (3.7, 0.261, 0.923),
    (3.8, 0.181, 0.949),
    (3.9, 0.123, 0.967),
    (4.0, 0.000, 1.000),
];

/// `(r, alpha_min, alpha_max)` for the cubic map.
pub const CUBIC_BOUNDS: [(f64, f64, f64); 8] = [
    (2.3, 0.668, 1.342),
    (2.4, 0.585, 1.408),
    (2.5, 0.286, 1.520),
    (2.6, -1.605, -0.035),
    (2.7, -1.698, 1.664),
    (2.8, -1.759, 1.405),
    (2.9, -1.884, 1.899),
    (3.0, -1.953, 1.861),
];

/// Initial conditions tried for each cubic row.
pub const CUBIC_SEEDS: [f64; 4] = [0.1, -0.1, 0.9, -0.9];

pub const LOGISTIC_TOLERANCE: f64 = 0.02;
pub const CUBIC_TOLERANCE: f64 = 0.05;

pub fn rows(kind: chaosig::MapKind) -> &'static [(f64, f64, f64)] {
    match kind {
        chaosig::MapKind::Logistic => &LOGISTIC_BOUNDS,
        chaosig::MapKind::Cubic => &CUBIC_BOUNDS,
    }
}
