use std::path::{Path, PathBuf};

use chaosig::chaos::{bounds_by_seed, DEFAULT_BURN_IN, DEFAULT_SAMPLES};
use chaosig::diagnostics::fit_through_origin;
use chaosig::io::{
    loss_csv, read_json, read_series_csv, scan_csv, series_csv, sweep_csv, to_json, write_atomic,
};
use chaosig::neuron::flat_inputs;
use chaosig::{
    bifurcation_scan, diagnose, estimate_alpha_bounds, lyapunov_exponent, sigma_sweep,
    AttractorBounds, ChaoticMap, DiagnosticsReport, DriverConfig, MapKind, PhiBounds, ScanSpec,
    SpatioTemporalNeuron, TrainConfig,
};

use crate::args::{
    BifurcationArgs, BoundsArgs, DiagnoseArgs, DriverArgs, GenerateArgs, SweepArgs, TrainArgs,
};
use crate::reference;
use crate::{CliError, CliResult};

pub(crate) fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    write_atomic(path, contents.as_bytes())
        .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))
}

fn require_positive(flag: &str, value: usize) -> CliResult<()> {
    if value == 0 {
        return Err(CliError::validation(format!("{flag}: must be at least 1")));
    }
    Ok(())
}

fn check_x0(flag: &str, map: &ChaoticMap, x0: f64) -> CliResult<()> {
    map.step(x0)
        .map(|_| ())
        .map_err(|e| CliError::flag(flag, e))
}

/// Interval visited by the map's attractor.
///
/// The fully chaotic logistic map covers `[0, 1]` exactly; anything else is
/// measured from a long orbit started at `x0`.
pub fn default_alpha_bounds(map: &ChaoticMap, x0: f64) -> chaosig::Result<AttractorBounds> {
    if map.kind() == MapKind::Logistic && map.r() == 4.0 {
        return AttractorBounds::new(0.0, 1.0);
    }
    estimate_alpha_bounds(map, x0, DEFAULT_BURN_IN, DEFAULT_SAMPLES)
}

pub fn driver_config(d: &DriverArgs, phi_min: f64, phi_max: f64) -> CliResult<DriverConfig> {
    let map = ChaoticMap::new(d.map, d.r).map_err(|e| CliError::flag("--r", e))?;
    check_x0("--alpha0", &map, d.alpha0)?;
    let phi =
        PhiBounds::new(phi_min, phi_max).map_err(|e| CliError::flag("--phi-min/--phi-max", e))?;
    let bounds = match (d.alpha_min, d.alpha_max) {
        (Some(lo), Some(hi)) => AttractorBounds::new(lo, hi)
            .map_err(|e| CliError::flag("--alpha-min/--alpha-max", e))?,
        (None, None) => default_alpha_bounds(&map, d.alpha0)?,
        _ => {
            return Err(CliError::validation(
                "--alpha-min/--alpha-max: give both bounds or neither",
            ))
        }
    };
    let config = DriverConfig::new(map, d.alpha0, bounds, phi);
    config
        .validate()
        .map_err(|e| CliError::flag("--alpha-min/--alpha-max", e))?;
    Ok(config)
}

pub fn bifurcation(a: &BifurcationArgs) -> CliResult<()> {
    a.map
        .validate_r(a.r_min)
        .map_err(|e| CliError::flag("--r-min", e))?;
    a.map
        .validate_r(a.r_max)
        .map_err(|e| CliError::flag("--r-max", e))?;
    if a.r_min >= a.r_max {
        return Err(CliError::validation(format!(
            "--r-min/--r-max: need r-min < r-max, got {} >= {}",
            a.r_min, a.r_max
        )));
    }
    if a.r_steps < 2 {
        return Err(CliError::validation("--r-steps: must be at least 2"));
    }
    require_positive("--samples", a.samples)?;
    check_x0("--x0", &ChaoticMap::new(a.map, a.r_min)?, a.x0)?;

    let spec = ScanSpec {
        kind: a.map,
        r_min: a.r_min,
        r_max: a.r_max,
        r_steps: a.r_steps,
        x0: a.x0,
        burn_in: a.burn_in,
        samples_per_r: a.samples,
    };
    let rows = bifurcation_scan(&spec)?;
    write_file(&a.out, &scan_csv(&rows))?;
    crate::out!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}

pub fn bounds(a: &BoundsArgs) -> CliResult<()> {
    let (kind, rs): (MapKind, Vec<f64>) = match a.table {
        Some(kind) => (
            kind,
            reference::rows(kind).iter().map(|row| row.0).collect(),
        ),
        None if !a.r.is_empty() => (a.map, a.r.clone()),
        None => {
            return Err(CliError::validation(
                "--r: give at least one r, or use --table",
            ))
        }
    };
    require_positive("--n", a.n)?;
    let mut maps = Vec::with_capacity(rs.len());
    for &r in &rs {
        maps.push(ChaoticMap::new(kind, r).map_err(|e| CliError::flag("--r", e))?);
    }
    let seeds: Vec<f64> = if a.seeds.is_empty() {
        vec![a.x0]
    } else {
        a.seeds.clone()
    };
    for map in &maps {
        for &x0 in &seeds {
            check_x0(
                if a.seeds.is_empty() {
                    "--x0"
                } else {
                    "--seeds"
                },
                map,
                x0,
            )?;
        }
    }

    if a.seeds.is_empty() {
        crate::out!("r,alpha_min,alpha_max");
    } else {
        crate::out!("r,x0,alpha_min,alpha_max");
    }
    for map in &maps {
        for (x0, result) in bounds_by_seed(map, &seeds, a.burn_in, a.n) {
            let b = result.map_err(|e| {
                CliError::from(chaosig::Error::AtParameter {
                    r: map.r(),
                    source: Box::new(e),
                })
            })?;
            if a.seeds.is_empty() {
                crate::out!("{},{:.6},{:.6}", map.r(), b.alpha_min, b.alpha_max);
            } else {
                crate::out!("{},{},{:.6},{:.6}", map.r(), x0, b.alpha_min, b.alpha_max);
            }
        }
    }
    Ok(())
}

fn report_path(out: &Path, report: Option<&PathBuf>) -> PathBuf {
    match report {
        Some(p) => p.clone(),
        None => {
            let mut name = out
                .file_stem()
                .map(|s| s.to_os_string())
                .unwrap_or_else(|| "output".into());
            name.push(".report.json");
            out.with_file_name(name)
        }
    }
}

/// Diagnostics for a generated series; the Lyapunov exponent is dropped if it is undefined.
pub fn series_report(
    series: &[f64],
    map: &ChaoticMap,
    max_lag: usize,
) -> chaosig::Result<DiagnosticsReport> {
    let lag = max_lag.min(series.len().saturating_sub(1)).max(1);
    match diagnose(series, Some(map), lag) {
        Ok(report) => Ok(report),
        Err(err) => {
            let report = diagnose(series, None, lag)?;
            eprintln!("warning: Lyapunov exponent omitted: {err}");
            Ok(report)
        }
    }
}

pub fn generate(a: &GenerateArgs) -> CliResult<()> {
    require_positive("--n", a.n)?;
    require_positive("--max-lag", a.max_lag)?;
    if !a.flat.is_finite() {
        return Err(CliError::validation("--flat: must be finite"));
    }
    let neuron = match &a.model {
        Some(path) => read_json::<SpatioTemporalNeuron>(path)
            .map_err(|e| CliError::validation(format!("--model {}: {e}", path.display())))?,
        None => {
            let driver = driver_config(&a.driver, a.phi_min, a.phi_max)?;
            SpatioTemporalNeuron::scalar(a.weight, a.bias, driver)
                .map_err(|e| CliError::flag("--weight/--bias", e))?
        }
    };
    if neuron.input_dim() != 1 {
        return Err(CliError::validation(format!(
            "--model: flat input needs a one-input neuron, model has {} weights",
            neuron.input_dim()
        )));
    }

    let series = neuron.generate(a.flat, a.n)?;
    write_file(&a.out, &series_csv(&series))?;
    crate::out!("wrote {} samples to {}", series.len(), a.out.display());

    if let Some(path) = &a.save_model {
        write_file(path, &to_json(&neuron)?)?;
    }

    let path = report_path(&a.out, a.report.as_ref());
    match series_report(&series, &neuron.driver_config().map, a.max_lag) {
        Ok(report) => {
            write_file(&path, &to_json(&report)?)?;
            crate::out!(
                "std_dev {:.6} mean {:.6} report {}",
                report.std_dev,
                report.mean,
                path.display()
            );
        }
        Err(err) => eprintln!("warning: no diagnostics report written: {err}"),
    }
    Ok(())
}

pub fn train(a: &TrainArgs) -> CliResult<()> {
    let target_path = a
        .target
        .as_ref()
        .ok_or_else(|| CliError::validation("--target: a target series CSV is required"))?;
    let config = TrainConfig {
        learning_rate: a.lr,
        max_epochs: a.epochs,
        mse_tolerance: a.tol,
        train_bias: !a.freeze_bias,
    };
    config
        .validate()
        .map_err(|e| CliError::flag("--lr/--epochs/--tol", e))?;
    if !a.flat.is_finite() {
        return Err(CliError::validation("--flat: must be finite"));
    }
    let target = read_series_csv(target_path)
        .map_err(|e| CliError::validation(format!("--target {}: {e}", target_path.display())))?;
    let neuron = match &a.model {
        Some(path) => read_json::<SpatioTemporalNeuron>(path)
            .map_err(|e| CliError::validation(format!("--model {}: {e}", path.display())))?,
        None => {
            let driver = driver_config(&a.driver, a.phi_min, a.phi_max)?;
            SpatioTemporalNeuron::scalar(a.weight, a.bias, driver)
                .map_err(|e| CliError::flag("--weight/--bias", e))?
        }
    };
    if neuron.input_dim() != 1 {
        return Err(CliError::validation(format!(
            "--model: flat input needs a one-input neuron, model has {} weights",
            neuron.input_dim()
        )));
    }

    let inputs = flat_inputs(a.flat, target.len());
    let (trained, report) = neuron.train(&inputs, &target, &config)?;
    if report.target_out_of_range > 0 {
        eprintln!(
            "warning: {} target samples lie outside [0, 1] and cannot be reached",
            report.target_out_of_range
        );
    }

    let output = trained.forward(&inputs)?;
    write_file(&a.out_model, &to_json(&trained)?)?;
    write_file(&a.out_loss, &loss_csv(&report.loss_curve))?;
    if let Some(path) = &a.out_series {
        write_file(path, &series_csv(&output))?;
    }

    crate::out!("epochs {}", report.epochs_run);
    crate::out!("initial_mse {:e}", report.loss_curve[0]);
    crate::out!("final_mse {:e}", report.final_mse);
    crate::out!(
        "preactivation {:.9} (w {:.9}, b {:.9})",
        trained.preactivation(&[a.flat]),
        trained.weights()[0],
        trained.bias()
    );
    let map = trained.driver_config().map;
    match (
        lyapunov_exponent(&target, &map),
        lyapunov_exponent(&output, &map),
    ) {
        (Ok(lt), Ok(lo)) => crate::out!(
            "lambda_target {lt:.6} lambda_output {lo:.6} difference {:.6}",
            (lt - lo).abs()
        ),
        (t, o) => eprintln!(
            "warning: lambda comparison unavailable ({})",
            t.err()
                .or(o.err())
                .map(|e| e.to_string())
                .unwrap_or_default()
        ),
    }
    Ok(())
}

pub fn diagnose_cmd(a: &DiagnoseArgs) -> CliResult<()> {
    let input = a
        .input
        .as_ref()
        .ok_or_else(|| CliError::validation("--input: a series CSV is required"))?;
    require_positive("--max-lag", a.max_lag)?;
    let map = a
        .map
        .map(|kind| ChaoticMap::new(kind, a.r))
        .transpose()
        .map_err(|e| CliError::flag("--r", e))?;
    let series = read_series_csv(input)
        .map_err(|e| CliError::validation(format!("--input {}: {e}", input.display())))?;
    if a.max_lag >= series.len() {
        return Err(CliError::validation(format!(
            "--max-lag: must be smaller than the series length {}",
            series.len()
        )));
    }
    let report = diagnose(&series, map.as_ref(), a.max_lag)?;
    let json = to_json(&report)?;
    match &a.out {
        Some(path) => {
            write_file(path, &json)?;
            crate::out!("wrote report to {}", path.display());
        }
        None => print!("{json}"),
    }
    Ok(())
}

pub fn sweep_sigma(a: &SweepArgs) -> CliResult<()> {
    if a.n < 2 {
        return Err(CliError::validation("--n: must be at least 2"));
    }
    if a.deltas.is_empty() {
        return Err(CliError::validation("--deltas: give at least one width"));
    }
    if let Some(bad) = a.deltas.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(CliError::validation(format!(
            "--deltas: widths must be positive, got {bad}"
        )));
    }
    let template = driver_config(&a.driver, a.phi_center, a.phi_center)?;
    let rows = sigma_sweep(a.phi_center, &a.deltas, &template, a.flat, a.n)?;
    write_file(&a.out, &sweep_csv(&rows))?;
    crate::out!("delta_phi,sigma");
    for row in &rows {
        crate::out!("{},{:.6}", row.delta_phi, row.sigma);
    }
    if rows.len() >= 2 {
        let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta_phi, r.sigma)).collect();
        let fit = fit_through_origin(&points)?;
        crate::out!("slope {:.6} r_squared {:.6}", fit.slope, fit.r_squared);
    }
    crate::out!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}
