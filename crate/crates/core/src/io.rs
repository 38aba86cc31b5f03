//! CSV serialization of series, curves, spectra and estimates.
//!
//! Formats, all with headers:
//! * series        — `x,y`, one row per time step; a `<path>.meta` sidecar
//!   records the generating configuration as `key = value` lines;
//! * curves        — `lag,value,kind`;
//! * spectra       — `lambda,re,im`;
//! * estimates     — `method,H_xy,slope_stderr,window_lo,window_hi,n_points`.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! write/read cycle reproduces values bit for bit and identical runs
//! produce byte-identical files.

use crate::arfima::{
    ArCoefficient, FracDiffOrder, InnovationSpec, PairKind, SeriesMeta, SeriesPair,
};
use crate::error::{Error, Result};
use crate::hurst::HurstEstimate;
use crate::xcorr::{CrossCorrelationCurve, SpectrumPoint};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Sidecar path for a series file: `<path>.meta`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(".meta");
    PathBuf::from(s)
}

/// Write a series pair as two-column CSV plus its metadata sidecar.
pub fn write_series_csv(pair: &SeriesPair, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(pair.len() * 16 + 8);
    out.push_str("x,y\n");
    for (x, y) in pair.x().iter().zip(pair.y()) {
        let _ = writeln!(out, "{x},{y}");
    }
    fs::write(path, out).map_err(io_err(path))?;

    let meta = pair.meta();
    let mut side = String::new();
    match meta.kind {
        PairKind::ArfimaArfima { d1, d2 } => {
            side.push_str("kind = arfima_arfima\n");
            let _ = writeln!(side, "d1 = {}", d1.value());
            let _ = writeln!(side, "d2 = {}", d2.value());
        }
        PairKind::ArfimaAr { d1, theta } => {
            side.push_str("kind = arfima_ar\n");
            let _ = writeln!(side, "d1 = {}", d1.value());
            let _ = writeln!(side, "theta = {}", theta.value());
        }
    }
    let _ = writeln!(side, "sigma_e2 = {}", meta.innovations.sigma_e2());
    let _ = writeln!(side, "sigma_v2 = {}", meta.innovations.sigma_v2());
    let _ = writeln!(side, "sigma_ev = {}", meta.innovations.sigma_ev());
    let _ = writeln!(side, "n = {}", meta.n);
    let _ = writeln!(side, "burn_in = {}", meta.burn_in);
    let _ = writeln!(side, "seed = {}", meta.seed);
    let sc = sidecar_path(path);
    fs::write(&sc, side).map_err(io_err(&sc))
}

/// Read a two-column series CSV (header `x,y`).
pub fn read_series_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let content = fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = content.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "x,y" => {}
        Some((_, header)) => {
            return Err(parse_err(
                path,
                1,
                format!("expected header 'x,y', got '{header}'"),
            ))
        }
        None => return Err(parse_err(path, 1, "empty file")),
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| parse_err(path, idx + 1, "expected two comma-separated values"))?;
        let xv: f64 = a
            .trim()
            .parse()
            .map_err(|e| parse_err(path, idx + 1, format!("bad x value '{a}': {e}")))?;
        let yv: f64 = b
            .trim()
            .parse()
            .map_err(|e| parse_err(path, idx + 1, format!("bad y value '{b}': {e}")))?;
        x.push(xv);
        y.push(yv);
    }
    if x.is_empty() {
        return Err(parse_err(path, 2, "no data rows"));
    }
    Ok((x, y))
}

/// Read a metadata sidecar back into a [`SeriesMeta`].
pub fn read_sidecar(path: &Path) -> Result<SeriesMeta> {
    let content = fs::read_to_string(path).map_err(io_err(path))?;
    let mut kind: Option<String> = None;
    let mut fields: std::collections::HashMap<String, f64> = std::collections::HashMap::new();
    for (idx, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| parse_err(path, idx + 1, "expected 'key = value'"))?;
        let (k, v) = (k.trim(), v.trim());
        if k == "kind" {
            kind = Some(v.to_string());
        } else {
            let parsed: f64 = v
                .parse()
                .map_err(|e| parse_err(path, idx + 1, format!("bad value for {k}: {e}")))?;
            fields.insert(k.to_string(), parsed);
        }
    }
    let get = |k: &str| -> Result<f64> {
        fields
            .get(k)
            .copied()
            .ok_or_else(|| parse_err(path, 0, format!("missing key '{k}'")))
    };
    let innovations = InnovationSpec::new(get("sigma_e2")?, get("sigma_v2")?, get("sigma_ev")?)?;
    let d1 = FracDiffOrder::new(get("d1")?)?;
    let kind = match kind.as_deref() {
        Some("arfima_arfima") => PairKind::ArfimaArfima {
            d1,
            d2: FracDiffOrder::new(get("d2")?)?,
        },
        Some("arfima_ar") => PairKind::ArfimaAr {
            d1,
            theta: ArCoefficient::new(get("theta")?)?,
        },
        other => {
            return Err(parse_err(
                path,
                0,
                format!("unknown kind '{}'", other.unwrap_or("<missing>")),
            ))
        }
    };
    Ok(SeriesMeta {
        kind,
        innovations,
        n: get("n")? as usize,
        burn_in: get("burn_in")? as usize,
        seed: get("seed")? as u64,
    })
}

/// Write a cross-correlation curve as `lag,value,kind`.
pub fn write_curve_csv(curve: &CrossCorrelationCurve, path: &Path) -> Result<()> {
    let mut out = String::from("lag,value,kind\n");
    let kind = curve.kind().as_str();
    for (lag, v) in curve.lags().iter().zip(curve.values()) {
        let _ = writeln!(out, "{lag},{v},{kind}");
    }
    fs::write(path, out).map_err(io_err(path))
}

/// Write spectrum points as `lambda,re,im`.
pub fn write_spectrum_csv(points: &[SpectrumPoint], path: &Path) -> Result<()> {
    let mut out = String::from("lambda,re,im\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.lambda(), p.value().re, p.value().im);
    }
    fs::write(path, out).map_err(io_err(path))
}

/// Write Hurst estimates, one CSV row per estimate.
pub fn write_estimates_csv(estimates: &[HurstEstimate], path: &Path) -> Result<()> {
    let mut out = String::from("method,H_xy,slope_stderr,window_lo,window_hi,n_points\n");
    for e in estimates {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            e.method.as_str(),
            e.h_xy,
            e.slope_stderr,
            e.window.0,
            e.window.1,
            e.n_points
        );
    }
    fs::write(path, out).map_err(io_err(path))
}
