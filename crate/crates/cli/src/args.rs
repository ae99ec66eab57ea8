use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use chaosig::MapKind;

#[derive(Debug, Parser)]
#[command(
    name = "chaosig",
    version,
    about = "Chaotic-steepness sigmoid neuron experiments",
    long_about = "Runs the map, neuron and diagnostics experiments and writes plot-ready CSV/JSON.\n\n\
                  Exit codes: 0 ok, 2 invalid flags or files, 3 numerical failure, 4 training divergence."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the attractor over a grid of growth parameters (CSV `r,x`)
    Bifurcation(BifurcationArgs),
    /// Print attractor bounds `r, alpha_min, alpha_max`
    Bounds(BoundsArgs),
    /// Run a neuron on flat input (CSV `t,value` plus a JSON diagnostics report)
    Generate(GenerateArgs),
    /// Fit weights and bias to a target series by gradient descent
    Train(TrainArgs),
    /// Diagnostics report for a `t,value` series
    Diagnose(DiagnoseArgs),
    /// Output standard deviation against the width of the phi interval (CSV `delta_phi,sigma`)
    SweepSigma(SweepArgs),
    /// Regenerate every table and figure dataset and check them
    ReproducePaper(ReproduceArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bifurcation(_) => "bifurcation",
            Command::Bounds(_) => "bounds",
            Command::Generate(_) => "generate",
            Command::Train(_) => "train",
            Command::Diagnose(_) => "diagnose",
            Command::SweepSigma(_) => "sweep-sigma",
            Command::ReproducePaper(_) => "reproduce-paper",
        }
    }
}

fn parse_map(s: &str) -> Result<MapKind, String> {
    s.parse().map_err(|e: chaosig::Error| e.to_string())
}

/// Map and driver flags shared by the neuron subcommands.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DriverArgs {
    /// Chaotic map driving phi(t): logistic or cubic
    #[arg(long, default_value = "logistic", value_parser = parse_map)]
    pub map: MapKind,
    /// Growth parameter of the map
    #[arg(long, default_value_t = 4.0)]
    pub r: f64,
    /// Initial map state (a burn-in of 1000 steps follows)
    #[arg(long, default_value_t = 0.1)]
    pub alpha0: f64,
    /// Lower attractor bound; estimated from the orbit when omitted
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_min: Option<f64>,
    /// Upper attractor bound; estimated from the orbit when omitted
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_max: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BifurcationArgs {
    /// Map kind: logistic or cubic
    #[arg(long, default_value = "logistic", value_parser = parse_map)]
    pub map: MapKind,
    #[arg(long, default_value_t = 2.5)]
    pub r_min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub r_max: f64,
    /// Number of grid points in r (endpoints included)
    #[arg(long, default_value_t = 600)]
    pub r_steps: usize,
    /// Retained iterates per grid point
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 1000)]
    pub burn_in: usize,
    #[arg(long, default_value = "bifurcation.csv")]
    pub out: PathBuf,
    /// JSON file with any of these flags (snake_case keys); explicit flags win
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BoundsArgs {
    /// Map kind: logistic or cubic
    #[arg(long, default_value = "logistic", value_parser = parse_map)]
    pub map: MapKind,
    /// Growth parameters, comma separated
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub r: Vec<f64>,
    /// Use the standard r rows for a map (logistic: 3.5..4.0, cubic: 2.3..3.0)
    #[arg(long, value_parser = parse_map)]
    pub table: Option<MapKind>,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub x0: f64,
    /// Additional initial conditions to try (comma separated); one row per seed
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub seeds: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    /// JSON file with any of these flags (snake_case keys); explicit flags win
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub driver: DriverArgs,
    #[arg(long, default_value_t = 0.9, allow_hyphen_values = true)]
    pub phi_min: f64,
    #[arg(long, default_value_t = 1.1, allow_hyphen_values = true)]
    pub phi_max: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub weight: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub bias: f64,
    /// Model JSON to run instead of the weight/bias/driver flags
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Constant input value
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub flat: f64,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 50)]
    pub max_lag: usize,
    #[arg(long, default_value = "output.csv")]
    pub out: PathBuf,
    /// Diagnostics report path (default: output path with `.report.json`)
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Also write the model that produced the series
    #[arg(long)]
    pub save_model: Option<PathBuf>,
    /// JSON file with any of these flags (snake_case keys); explicit flags win
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct TrainArgs {
    /// Target series CSV (`t,value`)
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Initial model JSON; otherwise built from the weight/bias/driver flags
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub driver: DriverArgs,
    #[arg(long, default_value_t = -2.7, allow_hyphen_values = true)]
    pub phi_min: f64,
    #[arg(long, default_value_t = 3.5, allow_hyphen_values = true)]
    pub phi_max: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub weight: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub bias: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub flat: f64,
    /// Learning rate
    #[arg(long, default_value_t = 0.5)]
    pub lr: f64,
    #[arg(long, default_value_t = 20_000)]
    pub epochs: usize,
    /// Stop once the MSE is at or below this value
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Keep the bias fixed
    #[arg(long, default_value_t = false)]
    pub freeze_bias: bool,
    #[arg(long, default_value = "model.json")]
    pub out_model: PathBuf,
    #[arg(long, default_value = "loss.csv")]
    pub out_loss: PathBuf,
    /// Also write the trained neuron's output series
    #[arg(long)]
    pub out_series: Option<PathBuf>,
    /// JSON file with any of these flags (snake_case keys); explicit flags win
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DiagnoseArgs {
    /// Series CSV (`t,value`)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Map whose derivative is used for the Lyapunov exponent; omitted means no exponent
    #[arg(long, value_parser = parse_map)]
    pub map: Option<MapKind>,
    #[arg(long, default_value_t = 4.0)]
    pub r: f64,
    #[arg(long, default_value_t = 50)]
    pub max_lag: usize,
    /// Report path; printed to stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with any of these flags (snake_case keys); explicit flags win
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub driver: DriverArgs,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub phi_center: f64,
    /// Widths phi_max - phi_min, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"
    )]
    pub deltas: Vec<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub flat: f64,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value = "sigma_sweep.csv")]
    pub out: PathBuf,
    /// JSON file with any of these flags (snake_case keys); explicit flags win
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReproduceArgs {
    /// Output directory
    #[arg(long, default_value = "reproduction")]
    pub out: PathBuf,
    /// Overwrite a non-empty output directory
    #[arg(long, default_value_t = false)]
    pub force: bool,
    /// JSON file with any of these flags (snake_case keys); explicit flags win
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}
