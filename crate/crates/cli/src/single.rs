//! One fully reported run: simulate a pair, write the series, its sample
//! CCF, both Hurst estimates, and the matching analytic curves.

use anyhow::{Context, Result};
use crossmem::arfima::{
    simulate_arfima_ar_pair, simulate_arfima_pair, PairKind, SimulationConfig, DEFAULT_MIN_BURN_IN,
};
use crossmem::hurst::{
    default_ccf_window, default_periodogram_bandwidth, estimate_hxy_ccf_decay,
    estimate_hxy_cross_periodogram, log_spaced_lags, EstimatorMethod, HurstEstimate,
};
use crossmem::io::{write_curve_csv, write_estimates_csv, write_series_csv};
use crossmem::xcorr::{
    asymptotic_cross_correlation_arfima, closed_form_cross_correlation_arfima_ar,
    default_truncation, exact_cross_correlation_arfima, exact_cross_correlation_arfima_ar,
    sample_cross_correlation, CrossCorrelationCurve, CurveKind,
};
use crossmem::{InnovationSpec, SeriesPair};
use std::path::{Path, PathBuf};

/// Everything one run needs.
#[derive(Debug, Clone)]
pub struct SingleConfig {
    pub kind: PairKind,
    pub innovations: InnovationSpec,
    pub n: usize,
    pub burn_in: Option<usize>,
    pub seed: u64,
    pub max_lag: Option<usize>,
    pub window: Option<(u64, u64)>,
    pub m: Option<usize>,
    pub out_dir: PathBuf,
}

/// Outcome of a run: the theory value, per-estimator results (failures are
/// recorded, not fatal), and the files written.
#[derive(Debug)]
pub struct RunReport {
    pub h_theory: f64,
    pub estimates: Vec<(EstimatorMethod, Result<HurstEstimate, String>)>,
    pub files: Vec<PathBuf>,
}

impl RunReport {
    pub fn print(&self) {
        println!("theoretical H_xy = {:.4}", self.h_theory);
        for (method, outcome) in &self.estimates {
            match outcome {
                Ok(e) => println!(
                    "{:<18} H_xy = {:.4} (slope stderr {:.4}, {} points)",
                    method.as_str(),
                    e.h_xy,
                    e.slope_stderr,
                    e.n_points
                ),
                Err(msg) => println!("{:<18} failed: {msg}", method.as_str()),
            }
        }
        for f in &self.files {
            println!("wrote {}", f.display());
        }
    }
}

pub fn run_single(cfg: &SingleConfig) -> Result<RunReport> {
    std::fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("creating output directory {}", cfg.out_dir.display()))?;
    let burn_in = cfg.burn_in.unwrap_or(cfg.n.max(DEFAULT_MIN_BURN_IN));
    let sim = SimulationConfig::with_burn_in(cfg.n, burn_in, cfg.seed)?;
    let pair = match cfg.kind {
        PairKind::ArfimaArfima { d1, d2 } => simulate_arfima_pair(d1, d2, &cfg.innovations, &sim),
        PairKind::ArfimaAr { d1, theta } => {
            simulate_arfima_ar_pair(d1, theta, &cfg.innovations, &sim)
        }
    };

    let mut files = Vec::new();
    let series_path = cfg.out_dir.join("series.csv");
    write_series_csv(&pair, &series_path)?;
    files.push(series_path.clone());
    files.push(crossmem::io::sidecar_path(&series_path));

    let window = cfg.window.unwrap_or_else(|| default_ccf_window(cfg.n));
    let max_lag = cfg.max_lag.unwrap_or(window.1 as usize);

    let ccf_path = cfg.out_dir.join("ccf_sample.csv");
    let sample_curve = sample_cross_correlation(&pair, max_lag)?;
    write_curve_csv(&sample_curve, &ccf_path)?;
    files.push(ccf_path);

    let mut estimates = Vec::new();
    let m = cfg
        .m
        .unwrap_or_else(|| default_periodogram_bandwidth(cfg.n));
    estimates.push((
        EstimatorMethod::CrossPeriodogram,
        estimate_hxy_cross_periodogram(&pair, m).map_err(|e| e.to_string()),
    ));
    estimates.push((
        EstimatorMethod::CcfDecay,
        estimate_hxy_ccf_decay(&sample_curve, window).map_err(|e| e.to_string()),
    ));
    let ok: Vec<HurstEstimate> = estimates
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok())
        .copied()
        .collect();
    let est_path = cfg.out_dir.join("estimates.csv");
    write_estimates_csv(&ok, &est_path)?;
    files.push(est_path);

    files.extend(write_analytic_curves(cfg, &pair, window.1)?);

    Ok(RunReport {
        h_theory: theory_for(&cfg.kind),
        estimates,
        files,
    })
}

pub fn theory_for(kind: &PairKind) -> f64 {
    match kind {
        PairKind::ArfimaArfima { d1, d2 } => (d1.hurst() + d2.hurst()) / 2.0,
        PairKind::ArfimaAr { d1, .. } => (d1.hurst() + 0.5) / 2.0,
    }
}

/// Exact curve always; the closed-form companion where it exists (both
/// orders positive for the fractional pair; the long-memory branch for the
/// AR pair, scaled to meet the exact curve at the first lag since the
/// closed form carries an arbitrary positive constant).
fn write_analytic_curves(cfg: &SingleConfig, _pair: &SeriesPair, hi: u64) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    let lags = log_spaced_lags(1, hi.max(8), 48);
    let spec = &cfg.innovations;
    match cfg.kind {
        PairKind::ArfimaArfima { d1, d2 } => {
            let values: Vec<f64> = lags
                .iter()
                .map(|&n| {
                    exact_cross_correlation_arfima(n, d1, d2, spec, default_truncation(n))
                        .map(|t| t.value)
                })
                .collect::<crossmem::Result<_>>()?;
            files.push(write_curve(
                &cfg.out_dir,
                "ccf_exact.csv",
                &lags,
                values,
                CurveKind::ExactTruncated,
            )?);
            if d1.value() > 0.0 && d2.value() > 0.0 && spec.sigma_ev() != 0.0 {
                let values: Vec<f64> = lags
                    .iter()
                    .map(|&n| asymptotic_cross_correlation_arfima(n as u64, d1, d2, spec))
                    .collect::<crossmem::Result<_>>()?;
                files.push(write_curve(
                    &cfg.out_dir,
                    "ccf_asymptotic.csv",
                    &lags,
                    values,
                    CurveKind::Asymptotic,
                )?);
            }
        }
        PairKind::ArfimaAr { d1, theta } => {
            let exact: Vec<f64> = lags
                .iter()
                .map(|&n| {
                    exact_cross_correlation_arfima_ar(n, d1, theta, spec, default_truncation(n))
                        .map(|t| t.value)
                })
                .collect::<crossmem::Result<_>>()?;
            if d1.value() > 0.0 && theta.value() > 0.0 && spec.sigma_ev() != 0.0 {
                let shape: crossmem::Result<Vec<f64>> = lags
                    .iter()
                    .map(|&n| {
                        closed_form_cross_correlation_arfima_ar(n as u64, d1.value(), theta.value())
                    })
                    .collect();
                if let Ok(shape) = shape {
                    let scale = exact[0] / shape[0];
                    let values: Vec<f64> = shape.iter().map(|v| v * scale).collect();
                    files.push(write_curve(
                        &cfg.out_dir,
                        "ccf_asymptotic.csv",
                        &lags,
                        values,
                        CurveKind::Asymptotic,
                    )?);
                }
            }
            files.push(write_curve(
                &cfg.out_dir,
                "ccf_exact.csv",
                &lags,
                exact,
                CurveKind::ExactTruncated,
            )?);
        }
    }
    Ok(files)
}

fn write_curve(
    dir: &Path,
    name: &str,
    lags: &[i64],
    values: Vec<f64>,
    kind: CurveKind,
) -> Result<PathBuf> {
    let curve = CrossCorrelationCurve::new(lags.to_vec(), values, kind, (1.0, 1.0))?;
    let path = dir.join(name);
    write_curve_csv(&curve, &path)?;
    Ok(path)
}
