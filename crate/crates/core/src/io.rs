//! CSV and JSON file formats.
//!
//! Numbers are written with 17 significant digits so every `f64` survives a
//! write/read cycle bit for bit. Files are written to a temporary sibling and
//! renamed into place, so a failed run never leaves a partial file behind.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::chaos::BifurcationPoint;
use crate::diagnostics::SigmaSweepRow;
use crate::error::{Error, Result};

/// Renders `x` like C's `%.17g`.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_string()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn render_rows<I, F>(header: &str, rows: I, mut line: F) -> String
where
    I: IntoIterator,
    F: FnMut(&mut String, I::Item),
{
    let mut out = String::with_capacity(64 * 1024);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        line(&mut out, row);
        out.push('\n');
    }
    out
}

/// `t,value` with integer `t` from 0.
pub fn series_csv(series: &[f64]) -> String {
    indexed_csv("t,value", series)
}

/// `t,x` orbit samples.
pub fn orbit_csv(samples: &[f64]) -> String {
    indexed_csv("t,x", samples)
}

fn indexed_csv(header: &str, values: &[f64]) -> String {
    render_rows(header, values.iter().enumerate(), |out, (t, &v)| {
        let _ = write!(out, "{t},{}", format_f64(v));
    })
}

/// `r,x` bifurcation rows.
pub fn scan_csv(points: &[BifurcationPoint]) -> String {
    render_rows("r,x", points, |out, p| {
        let _ = write!(out, "{},{}", format_f64(p.r), format_f64(p.x));
    })
}

/// `delta_phi,sigma` sweep rows.
pub fn sweep_csv(rows: &[SigmaSweepRow]) -> String {
    render_rows("delta_phi,sigma", rows, |out, row| {
        let _ = write!(
            out,
            "{},{}",
            format_f64(row.delta_phi),
            format_f64(row.sigma)
        );
    })
}

/// `epoch,mse` loss curve.
pub fn loss_csv(loss_curve: &[f64]) -> String {
    indexed_csv("epoch,mse", loss_curve)
}

/// Parses a `t,value` series; `t` must count up from 0.
pub fn parse_series_csv(text: &str) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "value" {
        return Err(Error::Format(format!(
            "expected header `t,value`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let t: usize = record[0]
            .parse()
            .map_err(|_| Error::Format(format!("row {row}: bad time index `{}`", &record[0])))?;
        if t != row {
            return Err(Error::Format(format!(
                "row {row}: expected t = {row}, found {t}"
            )));
        }
        let v: f64 = record[1]
            .parse()
            .map_err(|_| Error::Format(format!("row {row}: bad value `{}`", &record[1])))?;
        if !v.is_finite() {
            return Err(Error::Format(format!("row {row}: value is not finite")));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::Format("series file has no rows".into()));
    }
    Ok(values)
}

pub fn read_series_csv(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    parse_series_csv(&text)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Writes `contents` to a temporary file next to `path`, then renames it over `path`.
pub fn write_atomic(path: impl AsRef<Path>, contents: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
