use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates a documented precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A state value lies outside the map's domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("orbit diverged at step {step}: |x| = {value:e} exceeds 1e6")]
    Overflow { step: usize, value: f64 },

    /// `ln |f'(x)|` is undefined because the derivative vanishes.
    #[error("derivative vanishes at sample {index} (x = {value}); logarithm undefined")]
    Singularity { index: usize, value: f64 },

    #[error("degenerate attractor bounds: alpha_max - alpha_min = {width:e} < 1e-12")]
    DegenerateBounds { width: f64 },

    #[error("dimension mismatch at sample {index}: expected {expected} inputs, got {got}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("series too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("series variance {variance:e} is too small for autocorrelation")]
    ZeroVariance { variance: f64 },

    #[error("training diverged at epoch {epoch}: loss is not finite")]
    Divergence { epoch: usize },

    #[error("at r = {r}: {source}")]
    AtParameter {
        r: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{}", join_errors(.0))]
    Multiple(Vec<Error>),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Errors caused by bad inputs (as opposed to numerical breakdown).
    pub fn is_validation(&self) -> bool {
        match self {
            Error::InvalidParameter { .. }
            | Error::Domain(_)
            | Error::DimensionMismatch { .. }
            | Error::LengthMismatch { .. }
            | Error::TooShort { .. }
            | Error::Format(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_) => true,
            Error::AtParameter { source, .. } => source.is_validation(),
            Error::Multiple(errs) => errs.iter().all(Error::is_validation),
            _ => false,
        }
    }

    pub fn is_divergence(&self) -> bool {
        match self {
            Error::Divergence { .. } => true,
            Error::AtParameter { source, .. } => source.is_divergence(),
            Error::Multiple(errs) => errs.iter().any(Error::is_divergence),
            _ => false,
        }
    }
}

fn join_errors(errs: &[Error]) -> String {
    let mut messages: Vec<String> = Vec::new();
    for message in errs.iter().map(ToString::to_string) {
        if !messages.contains(&message) {
            messages.push(message);
        }
    }
    messages.join("; ")
}
