//! Bivariate Hurst exponent estimation and parameter conversions.
//!
//! Two deliberately independent estimators:
//!
//! * lag domain — OLS of `log |rho(n)|` on `log n` over a lag window; a
//!   cross-correlation decaying like `n^(2H-2)` maps the fitted slope `s`
//!   to `H = 1 + s/2`;
//! * frequency domain — OLS of `log |I_xy(lambda_j)|` on `log lambda_j`
//!   over the lowest Fourier frequencies; a cross-spectrum diverging like
//!   `lambda^-(2H-1)` maps the slope to `H = (1 - s)/2`.
//!
//! Agreement between the two is itself a consistency check the analytic
//! theory never needs, which is exactly why both exist.

use crate::error::{Error, Result};
use crate::util::mean;
use crate::xcorr::CrossCorrelationCurve;
use crate::SeriesPair;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// The three equivalent memory parameterizations, kept consistent by
/// construction: `d = H - 0.5` and `gamma = 2 - 2H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurstRelation {
    h: f64,
}

impl HurstRelation {
    pub fn from_h(h: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::OutOfRange {
                name: "H",
                value: h,
                constraint: "Hurst exponent must lie in (0, 1)",
            });
        }
        Ok(Self { h })
    }

    pub fn from_d(d: f64) -> Result<Self> {
        if !(d > -0.5 && d < 0.5) {
            return Err(Error::OutOfRange {
                name: "d",
                value: d,
                constraint: "fractional order must lie in (-0.5, 0.5)",
            });
        }
        Ok(Self { h: d + 0.5 })
    }

    pub fn from_gamma(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 2.0) {
            return Err(Error::OutOfRange {
                name: "gamma",
                value: gamma,
                constraint: "decay exponent must lie in (0, 2)",
            });
        }
        Ok(Self {
            h: 1.0 - gamma / 2.0,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn d(&self) -> f64 {
        self.h - 0.5
    }

    pub fn gamma(&self) -> f64 {
        2.0 - 2.0 * self.h
    }
}

/// Bivariate Hurst exponent of a jointly long-memory pair: the arithmetic
/// mean of the marginal exponents.
pub fn combine_hurst(h_x: f64, h_y: f64) -> Result<f64> {
    for (name, v) in [("H_x", h_x), ("H_y", h_y)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::OutOfRange {
                name,
                value: v,
                constraint: "Hurst exponent must lie in (0, 1)",
            });
        }
    }
    Ok((h_x + h_y) / 2.0)
}

/// Convert a cross-correlation decay exponent to the bivariate Hurst
/// exponent: `H_xy = 1 - gamma_xy / 2`.
pub fn hurst_from_gamma(gamma_xy: f64) -> Result<f64> {
    Ok(HurstRelation::from_gamma(gamma_xy)?.h())
}

/// Which estimator produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorMethod {
    CcfDecay,
    CrossPeriodogram,
}

impl EstimatorMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorMethod::CcfDecay => "ccf_decay",
            EstimatorMethod::CrossPeriodogram => "cross_periodogram",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ccf_decay" => Some(EstimatorMethod::CcfDecay),
            "cross_periodogram" => Some(EstimatorMethod::CrossPeriodogram),
            _ => None,
        }
    }
}

/// An estimated bivariate Hurst exponent with its fit diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurstEstimate {
    pub h_xy: f64,
    pub method: EstimatorMethod,
    /// Fit bounds: lag range for the lag-domain estimator, frequency range
    /// for the spectral one.
    pub window: (f64, f64),
    pub slope_stderr: f64,
    pub n_points: usize,
}

/// Minimum share of one sign among fitted values before the log-magnitude
/// regression is considered meaningful.
const SIGN_CONSISTENCY_MIN: f64 = 0.9;

/// Default spectral bandwidth: `floor(sqrt(n))` lowest Fourier frequencies.
pub fn default_periodogram_bandwidth(n: usize) -> usize {
    (n as f64).sqrt().floor() as usize
}

/// Default lag-domain fit window `[10, min(n/50, 1000)]`.
pub fn default_ccf_window(n: usize) -> (u64, u64) {
    (10, (n as u64 / 50).min(1000))
}

/// Up to `count` distinct integer lags, log-spaced across `[lo, hi]`.
pub fn log_spaced_lags(lo: u64, hi: u64, count: usize) -> Vec<i64> {
    assert!(lo >= 1 && lo <= hi && count >= 2);
    let (llo, lhi) = ((lo as f64).ln(), (hi as f64).ln());
    let mut lags: Vec<i64> = (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            (llo + t * (lhi - llo)).exp().round() as i64
        })
        .collect();
    lags.dedup();
    lags
}

/// Ordinary least squares of `y` on `x`; returns
/// `(slope, intercept, slope standard error)`. Needs `x.len() >= 3`.
fn ols(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = mean(x);
    let my = mean(y);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let r = yi - (intercept + slope * xi);
            r * r
        })
        .sum();
    let stderr = if n > 2.0 {
        (ss_res / ((n - 2.0) * sxx)).sqrt()
    } else {
        0.0
    };
    (slope, intercept, stderr)
}

/// Estimate `H_xy` from the decay of a cross-correlation curve.
///
/// Fits `log |rho(n)|` against `log n` over curve lags inside
/// `[window.0, window.1]`; the slope `s` gives `H_xy = 1 + s/2`. Exact
/// zeros are excluded (they carry no magnitude information); if fewer than
/// 90% of the remaining values share a sign the tail is noise rather than a
/// one-sided power law and the fit is refused.
pub fn estimate_hxy_ccf_decay(
    curve: &CrossCorrelationCurve,
    window: (u64, u64),
) -> Result<HurstEstimate> {
    let (lo, hi) = window;
    if lo < 1 || lo >= hi {
        return Err(Error::OutOfRange {
            name: "window",
            value: lo as f64,
            constraint: "need 1 <= lower < upper",
        });
    }
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut positives = 0usize;
    for (&lag, &v) in curve.lags().iter().zip(curve.values()) {
        if lag >= lo as i64 && lag <= hi as i64 && v != 0.0 {
            if v > 0.0 {
                positives += 1;
            }
            pts.push(((lag as f64).ln(), v.abs().ln()));
        }
    }
    if pts.len() < 3 {
        return Err(Error::InsufficientPoints(format!(
            "{} nonzero in-window lags, need >= 3",
            pts.len()
        )));
    }
    let majority = positives.max(pts.len() - positives) as f64 / pts.len() as f64;
    if majority < SIGN_CONSISTENCY_MIN {
        return Err(Error::SignInstability(format!(
            "only {:.0}% of in-window values share a sign",
            majority * 100.0
        )));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (slope, _, stderr) = ols(&xs, &ys);
    Ok(HurstEstimate {
        h_xy: 1.0 + slope / 2.0,
        method: EstimatorMethod::CcfDecay,
        window: (lo as f64, hi as f64),
        slope_stderr: stderr,
        n_points: pts.len(),
    })
}

/// Estimate `H_xy` from the cross-periodogram at the `m` lowest Fourier
/// frequencies.
///
/// Both series are demeaned; the cross-periodogram
/// `I_xy(lambda_j) = (2 pi N)^{-1} X(lambda_j) conj(Y(lambda_j))` is
/// evaluated at `lambda_j = 2 pi j / N`, `j = 1..m`, and `log |I_xy|` is
/// regressed on `log lambda_j`. The slope `s` gives `H_xy = (1 - s)/2`.
/// Zero ordinates are dropped; fewer than 3 survivors is an error.
pub fn cross_periodogram_estimate(x: &[f64], y: &[f64], m: usize) -> Result<HurstEstimate> {
    let n = x.len();
    if n == 0 || y.len() != n {
        return Err(Error::DegenerateInput(format!(
            "series lengths must match and be >= 1, got ({}, {})",
            n,
            y.len()
        )));
    }
    if m < 3 || m > n / 2 {
        return Err(Error::OutOfRange {
            name: "m",
            value: m as f64,
            constraint: "bandwidth must satisfy 3 <= m <= N/2",
        });
    }
    let mx = mean(x);
    let my = mean(y);
    let mut xf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v - mx, 0.0)).collect();
    let mut yf: Vec<Complex<f64>> = y.iter().map(|&v| Complex::new(v - my, 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    fft.process(&mut xf);
    fft.process(&mut yf);

    let norm = 1.0 / (2.0 * PI * n as f64);
    let mut log_lambda = Vec::with_capacity(m);
    let mut log_mag = Vec::with_capacity(m);
    for j in 1..=m {
        let i_xy = xf[j] * yf[j].conj() * norm;
        let mag = i_xy.norm();
        if mag == 0.0 {
            continue;
        }
        let lambda = 2.0 * PI * j as f64 / n as f64;
        log_lambda.push(lambda.ln());
        log_mag.push(mag.ln());
    }
    if log_lambda.len() < 3 {
        return Err(Error::InsufficientPoints(format!(
            "{} usable periodogram ordinates, need >= 3",
            log_lambda.len()
        )));
    }
    let (slope, _, stderr) = ols(&log_lambda, &log_mag);
    Ok(HurstEstimate {
        h_xy: (1.0 - slope) / 2.0,
        method: EstimatorMethod::CrossPeriodogram,
        window: (
            log_lambda.first().unwrap().exp(),
            log_lambda.last().unwrap().exp(),
        ),
        slope_stderr: stderr,
        n_points: log_lambda.len(),
    })
}

/// [`cross_periodogram_estimate`] applied to a simulated pair.
pub fn estimate_hxy_cross_periodogram(pair: &SeriesPair, m: usize) -> Result<HurstEstimate> {
    cross_periodogram_estimate(pair.x(), pair.y(), m)
}
