//! Exact, asymptotic and sample cross-correlation functions, and the
//! cross-power spectra they derive from.
//!
//! Lag convention: `rho_xy(n) = corr(x_t, y_{t+n})`, so `rho_xy(n)`
//! computed from `(x, y)` equals `rho_yx(-n)` computed from `(y, x)`.
//!
//! For a pair of fractionally differenced series with orders `(d1, d2)` and
//! innovation covariance `sigma_ev`, the cross-covariance at lag `n >= 0`
//! collapses to the single series `sigma_ev * sum_k a_k(d1) a_{n+k}(d2)`,
//! which this module evaluates by compensated truncated summation together
//! with an analytic bound on the neglected tail. The matching closed-form
//! asymptote is `sigma_ev * C(d1, d2) * n^(d1+d2-1) / (sigma_x sigma_y)`
//! with `C(d1, d2) = gamma(1-d1-d2) / (gamma(1-d2) gamma(d2))`.
//!
//! For a fractionally differenced series paired with an AR(1), the two lag
//! directions decay differently: hyperbolically on the side where the
//! long-memory series trails, geometrically on the other. See
//! [`exact_cross_correlation_arfima_ar`] for the exact orientation.

use crate::arfima::{ArCoefficient, FracDiffOrder, InnovationSpec, SeriesPair};
use crate::error::{Error, Result};
use crate::special;
use crate::util::{mean, CompensatedSum};
use num_complex::Complex64;
use std::f64::consts::PI;

/// One marginal process: fractionally differenced noise or AR(1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProcessSpec {
    Arfima(FracDiffOrder),
    Ar(ArCoefficient),
}

/// Stationary standard deviation of a marginal process driven by innovations
/// of the given variance.
///
/// Fractionally differenced noise: `sigma_e * sqrt(gamma(1-2d)) / gamma(1-d)`.
/// AR(1): `sigma_v / sqrt(1 - theta^2)`.
pub fn process_std(process: &ProcessSpec, innovation_variance: f64) -> Result<f64> {
    if innovation_variance < 0.0 || !innovation_variance.is_finite() {
        return Err(Error::OutOfRange {
            name: "innovation_variance",
            value: innovation_variance,
            constraint: "must be finite and >= 0",
        });
    }
    let sigma = innovation_variance.sqrt();
    Ok(match process {
        ProcessSpec::Arfima(d) => {
            let d = d.value();
            sigma * special::gamma(1.0 - 2.0 * d).sqrt() / special::gamma(1.0 - d)
        }
        ProcessSpec::Ar(theta) => {
            let th = theta.value();
            sigma / (1.0 - th * th).sqrt()
        }
    })
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= PI) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            constraint: "frequency must lie in (0, pi] (spectral pole at 0)",
        });
    }
    Ok(())
}

/// Cross-power spectrum of two fractionally differenced series:
/// `f_xy(lambda) = sigma_ev/(2 pi) (1 - e^{i lambda})^{-d1} (1 - e^{-i lambda})^{-d2}`
/// on the principal branch.
pub fn cross_spectrum_arfima(
    d1: FracDiffOrder,
    d2: FracDiffOrder,
    spec: &InnovationSpec,
    lambda: f64,
) -> Result<Complex64> {
    check_lambda(lambda)?;
    let z = Complex64::from_polar(1.0, lambda);
    let a = (Complex64::new(1.0, 0.0) - z).powf(-d1.value());
    let b = (Complex64::new(1.0, 0.0) - z.conj()).powf(-d2.value());
    Ok(a * b * (spec.sigma_ev() / (2.0 * PI)))
}

/// Cross-power spectrum of a fractionally differenced series paired with an
/// AR(1):
/// `f_xy(lambda) = sigma_ev/(2 pi) (1 - e^{-i lambda})^{-d1} (1 - theta e^{i lambda})^{-1}`.
///
/// With `theta = 0` this equals [`cross_spectrum_arfima`] with orders
/// `(0, d1)`; the long-memory factor enters conjugated relative to the
/// `(d1, 0)` ordering.
pub fn cross_spectrum_arfima_ar(
    d1: FracDiffOrder,
    theta: ArCoefficient,
    spec: &InnovationSpec,
    lambda: f64,
) -> Result<Complex64> {
    check_lambda(lambda)?;
    let z = Complex64::from_polar(1.0, lambda);
    let a = (Complex64::new(1.0, 0.0) - z.conj()).powf(-d1.value());
    let b = (Complex64::new(1.0, 0.0) - z * theta.value()).powi(-1);
    Ok(a * b * (spec.sigma_ev() / (2.0 * PI)))
}

/// Truncated-series cross-correlation value plus an analytic bound on the
/// magnitude of the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedCcf {
    pub value: f64,
    pub tail_bound: f64,
}

/// Default truncation length for the exact sums: `max(10^6, 1000 |n|)`.
pub fn default_truncation(n: i64) -> u64 {
    1_000_000u64.max(1000 * n.unsigned_abs())
}

/// Running weight `a_k(d)` advanced by the ratio recurrence.
struct WeightSeq {
    value: f64,
    k: u64,
    d: f64,
}

impl WeightSeq {
    /// Position the sequence at `a_start(d)`.
    fn starting_at(d: f64, start: u64) -> Self {
        let mut value = 1.0;
        for n in 1..=start {
            value *= (n as f64 - 1.0 + d) / n as f64;
        }
        Self { value, k: start, d }
    }

    fn advance(&mut self) {
        self.k += 1;
        self.value *= (self.k as f64 - 1.0 + self.d) / self.k as f64;
    }
}

/// Upper bound on `sup_{k > k_trunc} |a_k(d)| k^(1-d)`.
///
/// `|a_k(d)| k^(1-d)` is monotone in `k` with limit `1/|gamma(d)|`
/// (increasing for d > 0, decreasing for d < 0), so the sup over the tail is
/// the larger of the limit and the first tail element.
fn weight_envelope(d: f64, first_tail_weight: f64, first_tail_k: u64) -> f64 {
    if d == 0.0 {
        return 0.0;
    }
    let at_k = first_tail_weight.abs() * (first_tail_k as f64).powf(1.0 - d);
    at_k.max(1.0 / special::gamma(d).abs())
}

/// Exact cross-correlation of two fractionally differenced series at lag
/// `n`, truncated at `k_trunc` terms:
/// `rho_xy(n) = sigma_ev / (sigma_x sigma_y) * sum_{k=0}^{k_trunc} a_k(d1) a_{n+k}(d2)`
/// for `n >= 0`, with the weight roles swapped for `n < 0`
/// (`rho_xy(-n) = rho_yx(n)`).
pub fn exact_cross_correlation_arfima(
    n: i64,
    d1: FracDiffOrder,
    d2: FracDiffOrder,
    spec: &InnovationSpec,
    k_trunc: u64,
) -> Result<TruncatedCcf> {
    if k_trunc < 1 {
        return Err(Error::OutOfRange {
            name: "k_trunc",
            value: k_trunc as f64,
            constraint: "truncation length must be >= 1",
        });
    }
    // For n < 0 the offset moves to the d1 weights.
    let (da, db, offset) = if n >= 0 {
        (d1.value(), d2.value(), n as u64)
    } else {
        (d2.value(), d1.value(), n.unsigned_abs())
    };

    let mut wa = WeightSeq::starting_at(da, 0);
    let mut wb = WeightSeq::starting_at(db, offset);
    let mut acc = CompensatedSum::new();
    for _ in 0..=k_trunc {
        acc.add(wa.value * wb.value);
        wa.advance();
        wb.advance();
    }

    // Tail: |a_k| <= C_a k^(da-1), |a_{off+k}| <= C_b k^(db-1), and
    // sum_{k>K} k^(da+db-2) <= K^(da+db-1) / (1 - da - db).
    let ca = weight_envelope(da, wa.value, wa.k);
    let cb = weight_envelope(db, wb.value, wb.k);
    let kf = k_trunc as f64;
    let tail_raw = ca * cb * kf.powf(da + db - 1.0) / (1.0 - da - db);

    let (sx, sy) = pair_stds_arfima(d1, d2, spec)?;
    let norm = 1.0 / (sx * sy);
    Ok(TruncatedCcf {
        value: spec.sigma_ev() * acc.value() * norm,
        tail_bound: spec.sigma_ev().abs() * tail_raw * norm,
    })
}

fn pair_stds_arfima(
    d1: FracDiffOrder,
    d2: FracDiffOrder,
    spec: &InnovationSpec,
) -> Result<(f64, f64)> {
    let sx = process_std(&ProcessSpec::Arfima(d1), spec.sigma_e2())?;
    let sy = process_std(&ProcessSpec::Arfima(d2), spec.sigma_v2())?;
    if sx == 0.0 || sy == 0.0 {
        return Err(Error::DegenerateInput(
            "zero innovation variance leaves the correlation undefined".into(),
        ));
    }
    Ok((sx, sy))
}

/// Constant in the hyperbolic cross-correlation asymptote:
/// `C(d1, d2) = gamma(1 - d1 - d2) / (gamma(1 - d2) gamma(d2))`.
///
/// Asymmetric in `(d1, d2)` by construction: `d2` is the order of the
/// series that trails by `n`. Exposed so callers can compare both orderings
/// against the exact sum.
pub fn asymptotic_decay_constant(d1: f64, d2: f64) -> f64 {
    special::gamma(1.0 - d1 - d2) / (special::gamma(1.0 - d2) * special::gamma(d2))
}

/// Closed-form large-lag approximation of the cross-correlation of two
/// fractionally differenced series:
/// `rho_xy(n) ~ sigma_ev C(d1, d2) n^(d1+d2-1) / (sigma_x sigma_y)`.
///
/// Valid for `d1 > 0`, `d2 > 0` (the derivation integrates the weight
/// asymptote, which needs both orders positive) and `n >= 1`.
pub fn asymptotic_cross_correlation_arfima(
    n: u64,
    d1: FracDiffOrder,
    d2: FracDiffOrder,
    spec: &InnovationSpec,
) -> Result<f64> {
    if d1.value() <= 0.0 || d2.value() <= 0.0 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d1.value().min(d2.value()),
            constraint: "the hyperbolic asymptote requires d1 > 0 and d2 > 0",
        });
    }
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            value: 0.0,
            constraint: "the asymptote is a large-lag form, n >= 1",
        });
    }
    let (sx, sy) = pair_stds_arfima(d1, d2, spec)?;
    let c = asymptotic_decay_constant(d1.value(), d2.value());
    Ok(spec.sigma_ev() * c * (n as f64).powf(d1.value() + d2.value() - 1.0) / (sx * sy))
}

/// Exact cross-correlation of a fractionally differenced series `x` (order
/// `d1`, innovations `e`) paired with an AR(1) series `y` (coefficient
/// `theta`, innovations `v`), truncated at `k_trunc` terms.
///
/// The lag argument measures how far `x` trails `y`: the returned value at
/// lag `n` is `corr(y_t, x_{t+n})`, equivalently `rho_xy(-n)` under this
/// module's `corr(x_t, y_{t+n})` convention. Positive lags follow the
/// long-memory branch
/// `sigma_ev / (sigma_x sigma_y) * sum_{k=0}^{k_trunc} a_{n+k}(d1) theta^k`,
/// which decays hyperbolically like `n^(d1-1)`; negative lags collapse to
/// the geometric branch
/// `sigma_ev / (sigma_x sigma_y) * theta^|n| * sum_k a_k(d1) theta^k`.
pub fn exact_cross_correlation_arfima_ar(
    n: i64,
    d1: FracDiffOrder,
    theta: ArCoefficient,
    spec: &InnovationSpec,
    k_trunc: u64,
) -> Result<TruncatedCcf> {
    if k_trunc < 1 {
        return Err(Error::OutOfRange {
            name: "k_trunc",
            value: k_trunc as f64,
            constraint: "truncation length must be >= 1",
        });
    }
    let th = theta.value();
    let sx = process_std(&ProcessSpec::Arfima(d1), spec.sigma_e2())?;
    let sy = process_std(&ProcessSpec::Ar(theta), spec.sigma_v2())?;
    if sx == 0.0 || sy == 0.0 {
        return Err(Error::DegenerateInput(
            "zero innovation variance leaves the correlation undefined".into(),
        ));
    }
    let norm = 1.0 / (sx * sy);

    let offset = if n >= 0 { n as u64 } else { 0 };
    let mut w = WeightSeq::starting_at(d1.value(), offset);
    let mut theta_pow = 1.0;
    let mut acc = CompensatedSum::new();
    for _ in 0..=k_trunc {
        acc.add(w.value * theta_pow);
        w.advance();
        theta_pow *= th;
    }
    // Geometric tail: sup |a| over the tail times |theta|^(K+1) / (1 - |theta|).
    let tail_raw = w.value.abs() * th.abs().powi(k_trunc as i32 + 1) / (1.0 - th.abs());

    let (value, tail) = if n >= 0 {
        (acc.value(), tail_raw)
    } else {
        let lead = th.powi((-n) as i32);
        (lead * acc.value(), lead.abs() * tail_raw)
    };
    Ok(TruncatedCcf {
        value: spec.sigma_ev() * value * norm,
        tail_bound: spec.sigma_ev().abs() * tail * norm,
    })
}

/// Closed-form shape of the long-memory branch of the AR/fractional pair,
/// up to a positive constant:
/// `theta^{-n} Gamma(d1, -n ln theta) (-ln theta)^{-d1}`.
///
/// Computed through the exponentially scaled incomplete gamma so large
/// `n ln theta` neither overflows nor underflows. `d1` is any positive
/// real here (the expression stays meaningful past the stationary range);
/// `theta` must lie in (0, 1) for the logarithm to exist.
pub fn closed_form_cross_correlation_arfima_ar(n: u64, d1: f64, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            constraint: "closed form requires 0 < theta < 1 (log of theta)",
        });
    }
    if d1 <= 0.0 || !d1.is_finite() {
        return Err(Error::OutOfRange {
            name: "d1",
            value: d1,
            constraint: "closed form requires d1 > 0",
        });
    }
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            value: 0.0,
            constraint: "closed form is a large-lag shape, n >= 1",
        });
    }
    let ell = -theta.ln();
    let z = n as f64 * ell;
    Ok(special::upper_incomplete_gamma_scaled(d1, z)? * ell.powf(-d1))
}

/// Which route produced a cross-correlation curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Sample,
    ExactTruncated,
    Asymptotic,
}

impl CurveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveKind::Sample => "sample",
            CurveKind::ExactTruncated => "exact_truncated",
            CurveKind::Asymptotic => "asymptotic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sample" => Some(CurveKind::Sample),
            "exact_truncated" => Some(CurveKind::ExactTruncated),
            "asymptotic" => Some(CurveKind::Asymptotic),
            _ => None,
        }
    }
}

/// Cross-correlation values on a strictly increasing lag grid, tagged with
/// the route that produced them and the `(sigma_x, sigma_y)` normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCorrelationCurve {
    lags: Vec<i64>,
    values: Vec<f64>,
    kind: CurveKind,
    normalization: (f64, f64),
}

impl CrossCorrelationCurve {
    pub fn new(
        lags: Vec<i64>,
        values: Vec<f64>,
        kind: CurveKind,
        normalization: (f64, f64),
    ) -> Result<Self> {
        if lags.is_empty() || lags.len() != values.len() {
            return Err(Error::DegenerateInput(format!(
                "curve needs matching nonempty lags/values, got ({}, {})",
                lags.len(),
                values.len()
            )));
        }
        if !lags.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::DegenerateInput(
                "curve lags must be strictly increasing".into(),
            ));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::DegenerateInput("curve values must be finite".into()));
        }
        if kind == CurveKind::Sample {
            // Correlation bound; the slack covers rounding in the divisor.
            if let Some(v) = values.iter().find(|v| v.abs() > 1.0 + 1e-12) {
                return Err(Error::DegenerateInput(format!(
                    "sample correlation {v} outside [-1, 1]"
                )));
            }
        }
        Ok(Self {
            lags,
            values,
            kind,
            normalization,
        })
    }

    pub fn lags(&self) -> &[i64] {
        &self.lags
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn normalization(&self) -> (f64, f64) {
        self.normalization
    }
}

/// One point of a cross-spectral density, `lambda` in `(0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    lambda: f64,
    value: Complex64,
}

impl SpectrumPoint {
    pub fn new(lambda: f64, value: Complex64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self { lambda, value })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }
}

/// Biased (divisor `N`) sample cross-correlation over lags
/// `-max_lag ..= max_lag`:
/// `rho_hat(n) = sum_t (x_t - xbar)(y_{t+n} - ybar) / (N s_x s_y)`.
///
/// The divisor-`N` normalization keeps every value inside `[-1, 1]` by
/// Cauchy-Schwarz. Requires `max_lag < N/4` and non-constant inputs.
pub fn sample_cross_correlation(
    pair: &SeriesPair,
    max_lag: usize,
) -> Result<CrossCorrelationCurve> {
    sample_cross_correlation_xy(pair.x(), pair.y(), max_lag)
}

/// Slice-level variant of [`sample_cross_correlation`] for externally
/// sourced series.
pub fn sample_cross_correlation_xy(
    x: &[f64],
    y: &[f64],
    max_lag: usize,
) -> Result<CrossCorrelationCurve> {
    let lags: Vec<i64> = (-(max_lag as i64)..=max_lag as i64).collect();
    let (values, norm) = sample_ccf_at_lags(x, y, &lags, max_lag)?;
    CrossCorrelationCurve::new(lags, values, CurveKind::Sample, norm)
}

/// Sample cross-correlation restricted to an arbitrary lag subset (used for
/// log-spaced fitting grids). `max_abs_lag` drives the `N/4` check and must
/// bound the requested lags.
pub fn sample_ccf_at_lags(
    x: &[f64],
    y: &[f64],
    lags: &[i64],
    max_abs_lag: usize,
) -> Result<(Vec<f64>, (f64, f64))> {
    let n = x.len();
    if n == 0 || y.len() != n {
        return Err(Error::DegenerateInput(format!(
            "series lengths must match and be >= 1, got ({}, {})",
            n,
            y.len()
        )));
    }
    if max_abs_lag >= n / 4 {
        return Err(Error::OutOfRange {
            name: "max_lag",
            value: max_abs_lag as f64,
            constraint: "lag range must stay below N/4",
        });
    }
    if lags.iter().any(|l| l.unsigned_abs() as usize > max_abs_lag) {
        return Err(Error::OutOfRange {
            name: "lag",
            value: 0.0,
            constraint: "requested lag exceeds max_abs_lag",
        });
    }

    let mx = mean(x);
    let my = mean(y);
    let sx = (x.iter().map(|v| (v - mx) * (v - mx)).sum::<f64>() / n as f64).sqrt();
    let sy = (y.iter().map(|v| (v - my) * (v - my)).sum::<f64>() / n as f64).sqrt();
    if sx == 0.0 || sy == 0.0 {
        return Err(Error::DegenerateInput(
            "constant series has no correlation structure".into(),
        ));
    }

    let denom = n as f64 * sx * sy;
    let values = lags
        .iter()
        .map(|&lag| {
            let mut acc = CompensatedSum::new();
            if lag >= 0 {
                let lag = lag as usize;
                for t in 0..n - lag {
                    acc.add((x[t] - mx) * (y[t + lag] - my));
                }
            } else {
                let lag = (-lag) as usize;
                for t in lag..n {
                    acc.add((x[t] - mx) * (y[t - lag] - my));
                }
            }
            acc.value() / denom
        })
        .collect();
    Ok((values, (sx, sy)))
}

/// Numerical inverse Fourier transform of a closed-form cross-spectrum:
/// `gamma(n) = 2 Re integral_0^pi f(lambda) e^{i n lambda} d lambda`,
/// evaluated by Simpson's rule on the graded substitution `lambda = pi u^2`
/// (nodes cluster quadratically near the integrable pole at zero).
///
/// Returns the unnormalized cross-covariance; divide by `sigma_x sigma_y`
/// to compare against correlation values.
pub fn ccf_from_spectrum_quadrature<F>(f: F, n: i64, intervals: usize) -> f64
where
    F: Fn(f64) -> Complex64,
{
    let m = intervals.max(2) & !1usize;
    let h = 1.0 / m as f64;
    let g = |u: f64| -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        let lambda = PI * u * u;
        let phase = Complex64::from_polar(1.0, n as f64 * lambda);
        2.0 * (f(lambda) * phase).re * 2.0 * PI * u
    };
    let mut acc = g(0.0) + g(1.0);
    for j in 1..m {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(j as f64 * h);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: f64) -> FracDiffOrder {
        FracDiffOrder::new(v).unwrap()
    }

    fn th(v: f64) -> ArCoefficient {
        ArCoefficient::new(v).unwrap()
    }

    fn spec(e2: f64, v2: f64, ev: f64) -> InnovationSpec {
        InnovationSpec::new(e2, v2, ev).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn process_std_examples() {
        let s = process_std(&ProcessSpec::Arfima(d(0.0)), 1.0).unwrap();
        assert!(rel(s, 1.0) < 1e-14);

        let s = process_std(&ProcessSpec::Ar(th(0.0)), 4.0).unwrap();
        assert!(rel(s, 2.0) < 1e-14);

        let s = process_std(&ProcessSpec::Arfima(d(0.4)), 1.0).unwrap();
        assert!((s - 1.4388).abs() < 1e-4);
    }

    #[test]
    fn process_std_agrees_with_truncated_weight_sum() {
        // Oracle: sigma_x^2 = sum_k a_k(d)^2, truncated with the analytic
        // hyperbolic tail accounted for. At d = 0.2 the K = 1e6 partial sum
        // is converged to ~2e-5 relative; at d = 0.4 the remaining tail is
        // itself checked against its integral estimate.
        for &dv in &[0.2, 0.4] {
            let k = 1_000_000u64;
            let mut w = WeightSeq::starting_at(dv, 0);
            let mut acc = CompensatedSum::new();
            for _ in 0..=k {
                acc.add(w.value * w.value);
                w.advance();
            }
            let partial = acc.value();
            let closed = process_std(&ProcessSpec::Arfima(d(dv)), 1.0)
                .unwrap()
                .powi(2);
            let tail = closed - partial;
            // Integral estimate of the tail: K^(2d-1) / ((1-2d) gamma(d)^2).
            let est =
                (k as f64).powf(2.0 * dv - 1.0) / ((1.0 - 2.0 * dv) * special::gamma(dv).powi(2));
            assert!(tail > 0.0, "d = {dv}: truncation must undershoot");
            assert!(
                (tail - est).abs() < 0.05 * est,
                "d = {dv}: tail {tail} vs estimate {est}"
            );
        }
        // Fast-converging case pins the closed form directly.
        let k = 1_000_000u64;
        let mut w = WeightSeq::starting_at(0.2, 0);
        let mut acc = CompensatedSum::new();
        for _ in 0..=k {
            acc.add(w.value * w.value);
            w.advance();
        }
        let closed = process_std(&ProcessSpec::Arfima(d(0.2)), 1.0)
            .unwrap()
            .powi(2);
        assert!(rel(acc.value(), closed) < 1e-4);
    }

    #[test]
    fn spectrum_arfima_at_pi() {
        // 1 - e^{+-i pi} = 2, so f = 2^{-(d1+d2)} sigma_ev / (2 pi), real.
        let f = cross_spectrum_arfima(d(0.4), d(0.2), &spec(1.0, 1.0, 1.0), PI).unwrap();
        assert!(rel(f.re, 2f64.powf(-0.6) / (2.0 * PI)) < 1e-12);
        assert!((f.re - 0.10500).abs() < 1e-4);
        assert!(f.im.abs() < 1e-12);
    }

    #[test]
    fn spectrum_white_noise_is_flat() {
        for &lam in &[0.01, 0.5, 1.5, PI] {
            let f = cross_spectrum_arfima(d(0.0), d(0.0), &spec(1.0, 1.0, 0.7), lam).unwrap();
            assert!(rel(f.re, 0.7 / (2.0 * PI)) < 1e-12);
            assert!(f.im.abs() < 1e-14);
        }
    }

    #[test]
    fn spectrum_small_lambda_power_law() {
        let s = spec(1.0, 1.0, 1.0);
        let lam = 1e-4;
        let f = cross_spectrum_arfima(d(0.4), d(0.2), &s, lam).unwrap();
        let scaled = f.norm() * lam.powf(0.6);
        assert!(rel(scaled, 1.0 / (2.0 * PI)) < 0.01, "scaled {scaled}");
    }

    #[test]
    fn spectrum_pole_rejected() {
        assert!(cross_spectrum_arfima(d(0.4), d(0.2), &spec(1.0, 1.0, 1.0), 0.0).is_err());
        assert!(cross_spectrum_arfima_ar(d(0.4), th(0.5), &spec(1.0, 1.0, 1.0), 3.2).is_err());
    }

    #[test]
    fn spectrum_ar_at_pi() {
        let f = cross_spectrum_arfima_ar(d(0.4), th(0.5), &spec(1.0, 1.0, 1.0), PI).unwrap();
        assert!(rel(f.re, 2f64.powf(-0.4) / (2.0 * PI * 1.5)) < 1e-12);
        assert!((f.re - 0.08041).abs() < 1e-4);
        assert!(f.im.abs() < 1e-12);
    }

    #[test]
    fn spectrum_ar_theta_zero_reduces_to_pure_fractional() {
        // theta = 0 removes the AR factor; the remaining conjugated
        // long-memory factor equals the (0, d1) ordering exactly, and the
        // (d1, 0) ordering up to conjugation.
        for &lam in &[0.02, 1.0, PI] {
            let s = spec(1.0, 1.0, 0.8);
            let a = cross_spectrum_arfima_ar(d(0.4), th(0.0), &s, lam).unwrap();
            let b = cross_spectrum_arfima(d(0.0), d(0.4), &s, lam).unwrap();
            let c = cross_spectrum_arfima(d(0.4), d(0.0), &s, lam).unwrap();
            assert!((a - b).norm() < 1e-14);
            assert!((a - c.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn spectrum_ar_small_lambda_scaling() {
        let s = spec(1.0, 1.0, 1.0);
        for &theta_v in &[0.3, 0.9] {
            let f1 = cross_spectrum_arfima_ar(d(0.4), th(theta_v), &s, 1e-3)
                .unwrap()
                .norm();
            let f2 = cross_spectrum_arfima_ar(d(0.4), th(theta_v), &s, 1e-2)
                .unwrap()
                .norm();
            // |f| ~ lambda^{-0.4} / (1 - theta): a decade in lambda scales
            // the modulus by 10^{0.4}.
            assert!(rel(f1 / f2, 10f64.powf(0.4)) < 0.02);
            let predicted = 1e-3f64.powf(-0.4) / (1.0 - theta_v) / (2.0 * PI);
            assert!(rel(f1, predicted) < 0.02);
        }
    }

    #[test]
    fn exact_ccf_white_noise() {
        let s = spec(1.0, 1.0, 0.5);
        let r0 = exact_cross_correlation_arfima(0, d(0.0), d(0.0), &s, 10).unwrap();
        assert!(rel(r0.value, 0.5) < 1e-14);
        assert_eq!(r0.tail_bound, 0.0);
        for n in [-3i64, 1, 7] {
            let r = exact_cross_correlation_arfima(n, d(0.0), d(0.0), &s, 10).unwrap();
            assert_eq!(r.value, 0.0);
        }
    }

    #[test]
    fn exact_ccf_golden_value() {
        // Frozen before the build from a K = 1e7 compensated direct
        // summation oracle (weights by the same ratio recurrence in f64,
        // cross-checked against 40-digit arithmetic at K = 2e5).
        let s = spec(1.0, 1.0, 1.0);
        let r = exact_cross_correlation_arfima(0, d(0.4), d(0.2), &s, 10_000_000).unwrap();
        assert!(
            rel(r.value, 0.848_084_337_716_877) < 1e-9,
            "rho(0) = {}",
            r.value
        );
    }

    #[test]
    fn exact_ccf_antisymmetry() {
        let s = spec(1.0, 2.0, 0.6);
        for n in [0i64, 1, 5, 40] {
            let a = exact_cross_correlation_arfima(n, d(0.35), d(0.15), &s, 20_000).unwrap();
            // Swapping the orders swaps the roles of x and y, but the
            // innovation variances stay attached to their processes, so
            // compare through the unnormalized sums.
            let b = exact_cross_correlation_arfima(-n, d(0.15), d(0.35), &s, 20_000).unwrap();
            let sx = process_std(&ProcessSpec::Arfima(d(0.35)), 1.0).unwrap();
            let sy = process_std(&ProcessSpec::Arfima(d(0.15)), 2.0).unwrap();
            let sx2 = process_std(&ProcessSpec::Arfima(d(0.15)), 1.0).unwrap();
            let sy2 = process_std(&ProcessSpec::Arfima(d(0.35)), 2.0).unwrap();
            assert!(
                rel(a.value * sx * sy, b.value * sx2 * sy2) < 1e-12,
                "n = {n}"
            );
        }
    }

    #[test]
    fn exact_ccf_linear_in_sigma_ev() {
        let half =
            exact_cross_correlation_arfima(12, d(0.4), d(0.2), &spec(1.0, 1.0, 0.5), 100_000)
                .unwrap();
        let full =
            exact_cross_correlation_arfima(12, d(0.4), d(0.2), &spec(1.0, 1.0, 1.0), 100_000)
                .unwrap();
        assert_eq!(half.value, 0.5 * full.value);

        let zero =
            exact_cross_correlation_arfima(12, d(0.4), d(0.2), &spec(1.0, 1.0, 0.0), 100_000)
                .unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn exact_ccf_stays_in_correlation_range() {
        // Cauchy-Schwarz holds for every truncation level when the spec is
        // a valid correlation structure.
        let grid_d = [-0.4, -0.1, 0.1, 0.3, 0.45];
        for &d1v in &grid_d {
            for &d2v in &grid_d {
                for n in [-50i64, -1, 0, 3, 100] {
                    let r = exact_cross_correlation_arfima(
                        n,
                        d(d1v),
                        d(d2v),
                        &spec(1.0, 1.0, 1.0),
                        5_000,
                    )
                    .unwrap();
                    assert!(
                        r.value.abs() <= 1.0 + 1e-12,
                        "d1={d1v} d2={d2v} n={n}: {}",
                        r.value
                    );
                }
            }
        }
    }

    #[test]
    fn exact_ccf_tail_bound_is_a_bound() {
        // Compare K = 1e4 against a much longer truncation; the difference
        // must sit inside the reported tail bound.
        let s = spec(1.0, 1.0, 0.5);
        for &(d1v, d2v, n) in &[
            (0.4, 0.2, 0i64),
            (0.3, 0.45, 7),
            (-0.3, 0.4, 3),
            (0.25, 0.25, -11),
        ] {
            let short = exact_cross_correlation_arfima(n, d(d1v), d(d2v), &s, 10_000).unwrap();
            let long = exact_cross_correlation_arfima(n, d(d1v), d(d2v), &s, 3_000_000).unwrap();
            assert!(
                (long.value - short.value).abs() <= short.tail_bound,
                "d1={d1v} d2={d2v} n={n}: diff {} vs bound {}",
                (long.value - short.value).abs(),
                short.tail_bound
            );
        }
    }

    #[test]
    fn asymptotic_matches_exact_at_large_lag() {
        let s = spec(1.0, 1.0, 0.5);
        let n = 1000;
        let exact = exact_cross_correlation_arfima(n, d(0.4), d(0.2), &s, 1_000_000)
            .unwrap()
            .value;
        let asym = asymptotic_cross_correlation_arfima(n as u64, d(0.4), d(0.2), &s).unwrap();
        let ratio = exact / asym;
        assert!((0.95..=1.05).contains(&ratio), "exact/asymptotic = {ratio}");
        // The constant is genuinely asymmetric: the swapped ordering moves
        // the ratio far from 1.
        let swapped =
            asym * asymptotic_decay_constant(0.2, 0.4) / asymptotic_decay_constant(0.4, 0.2);
        assert!((exact / swapped - 1.0).abs() > 0.2);
    }

    #[test]
    fn asymptotic_power_law_homogeneity() {
        let s = spec(1.0, 1.0, 0.5);
        let v1 = asymptotic_cross_correlation_arfima(500, d(0.4), d(0.2), &s).unwrap();
        let v2 = asymptotic_cross_correlation_arfima(1000, d(0.4), d(0.2), &s).unwrap();
        assert!(rel(v2 / v1, 2f64.powf(0.4 + 0.2 - 1.0)) < 1e-12);
    }

    #[test]
    fn asymptotic_linear_in_sigma_ev() {
        let a =
            asymptotic_cross_correlation_arfima(64, d(0.4), d(0.2), &spec(1.0, 1.0, 0.5)).unwrap();
        let b =
            asymptotic_cross_correlation_arfima(64, d(0.4), d(0.2), &spec(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(a, 0.5 * b);
    }

    #[test]
    fn asymptotic_rejects_nonpositive_orders() {
        let s = spec(1.0, 1.0, 0.5);
        assert!(asymptotic_cross_correlation_arfima(10, d(0.0), d(0.2), &s).is_err());
        assert!(asymptotic_cross_correlation_arfima(10, d(0.4), d(-0.2), &s).is_err());
        assert!(asymptotic_cross_correlation_arfima(0, d(0.4), d(0.2), &s).is_err());
    }

    #[test]
    fn ar_ccf_theta_zero_collapses_to_weights() {
        // With theta = 0 only the k = 0 term survives: a_n(d1) normalized.
        let s = spec(1.0, 1.0, 0.5);
        let w = crate::arfima::ma_weights(d(0.4), 10);
        let sx = process_std(&ProcessSpec::Arfima(d(0.4)), 1.0).unwrap();
        for n in [0i64, 1, 5, 10] {
            let r = exact_cross_correlation_arfima_ar(n, d(0.4), th(0.0), &s, 50).unwrap();
            assert!(
                (r.value - 0.5 * w[n as usize] / sx).abs() < 1e-15,
                "n = {n}"
            );
        }
    }

    #[test]
    fn ar_ccf_white_long_memory_side_is_geometric() {
        // d1 = 0 leaves x white; the geometric branch (negative lags here)
        // carries theta^|n|, the long-memory branch vanishes at n >= 1.
        let s = spec(1.0, 1.0, 0.5);
        let sy = process_std(&ProcessSpec::Ar(th(0.6)), 1.0).unwrap();
        for m in [1i64, 2, 5] {
            let r = exact_cross_correlation_arfima_ar(-m, d(0.0), th(0.6), &s, 50).unwrap();
            let expected = 0.5 * 0.6f64.powi(m as i32) / sy;
            assert!(rel(r.value, expected) < 1e-12, "m = {m}");
            let r = exact_cross_correlation_arfima_ar(m, d(0.0), th(0.6), &s, 50).unwrap();
            assert_eq!(r.value, 0.0);
        }
    }

    #[test]
    fn ar_ccf_golden_value() {
        // Frozen before the build from a K = 1e5 direct-summation oracle;
        // the geometric tail beyond K = 1e5 is far below resolution.
        let s = spec(1.0, 1.0, 0.5);
        let r = exact_cross_correlation_arfima_ar(100, d(0.4), th(0.9), &s, 100_000).unwrap();
        assert!(
            rel(r.value, 0.041_003_352_079_541_415) < 1e-9,
            "rho = {}",
            r.value
        );
    }

    #[test]
    fn ar_ccf_generating_function_identity() {
        // sum_k a_k(d) theta^k = (1 - theta)^{-d}: the lag-0 value has a
        // closed form to pin the whole machinery.
        let s = spec(1.0, 1.0, 1.0);
        let sx = process_std(&ProcessSpec::Arfima(d(0.4)), 1.0).unwrap();
        let sy = process_std(&ProcessSpec::Ar(th(0.9)), 1.0).unwrap();
        let r = exact_cross_correlation_arfima_ar(0, d(0.4), th(0.9), &s, 3_000).unwrap();
        let expected = 0.1f64.powf(-0.4) / (sx * sy);
        assert!(rel(r.value, expected) < 1e-10);
    }

    #[test]
    fn ar_ccf_tail_bound_is_a_bound() {
        let s = spec(1.0, 1.0, 0.5);
        for &(d1v, theta_v, n) in &[(0.4, 0.9, 10i64), (0.2, -0.7, 3), (-0.3, 0.5, -5)] {
            let short = exact_cross_correlation_arfima_ar(n, d(d1v), th(theta_v), &s, 20).unwrap();
            let long =
                exact_cross_correlation_arfima_ar(n, d(d1v), th(theta_v), &s, 2_000).unwrap();
            assert!(
                (long.value - short.value).abs() <= short.tail_bound,
                "d1={d1v} theta={theta_v} n={n}"
            );
        }
    }

    #[test]
    fn closed_form_proportional_to_exact_sum() {
        let s = spec(1.0, 1.0, 1.0);
        let ratios: Vec<f64> = [50u64, 100, 200]
            .iter()
            .map(|&n| {
                let exact = exact_cross_correlation_arfima_ar(
                    n as i64,
                    d(0.4),
                    th(0.5),
                    &s,
                    default_truncation(n as i64),
                )
                .unwrap()
                .value;
                closed_form_cross_correlation_arfima_ar(n, 0.4, 0.5).unwrap() / exact
            })
            .collect();
        for r in &ratios[1..] {
            assert!(
                (r / ratios[0] - 1.0).abs() < 0.02,
                "ratios not constant: {ratios:?}"
            );
        }
    }

    #[test]
    fn closed_form_hyperbolic_plateau() {
        // closed_form(n) n^{1-d1} settles to a constant.
        let a = closed_form_cross_correlation_arfima_ar(500, 0.4, 0.5).unwrap() * 500f64.powf(0.6);
        let b =
            closed_form_cross_correlation_arfima_ar(1000, 0.4, 0.5).unwrap() * 1000f64.powf(0.6);
        assert!(rel(a, b) < 0.02, "{a} vs {b}");
    }

    #[test]
    fn closed_form_at_unit_order_is_constant() {
        // Gamma(1, x) = e^{-x} collapses the expression to (-ln theta)^{-1}.
        let ell_inv = 1.0 / (-0.5f64.ln());
        for n in [1u64, 10, 100, 1000] {
            let v = closed_form_cross_correlation_arfima_ar(n, 1.0, 0.5).unwrap();
            assert!(rel(v, ell_inv) < 1e-12, "n = {n}: {v}");
        }
    }

    #[test]
    fn closed_form_domain() {
        assert!(closed_form_cross_correlation_arfima_ar(10, 0.4, 0.0).is_err());
        assert!(closed_form_cross_correlation_arfima_ar(10, 0.4, -0.5).is_err());
        assert!(closed_form_cross_correlation_arfima_ar(10, 0.0, 0.5).is_err());
        assert!(closed_form_cross_correlation_arfima_ar(0, 0.4, 0.5).is_err());
    }

    #[test]
    fn ar_exact_sum_decay_exponent_independent_of_theta() {
        // Fitted log-log slope over n in [100, 1000] moves by < 0.03
        // between weak and strong short memory.
        let s = spec(1.0, 1.0, 0.5);
        let slope_for = |theta_v: f64| -> f64 {
            let lags: Vec<u64> = vec![100, 140, 200, 280, 400, 560, 800, 1000];
            let pts: Vec<(f64, f64)> = lags
                .iter()
                .map(|&n| {
                    let v = exact_cross_correlation_arfima_ar(
                        n as i64,
                        d(0.4),
                        th(theta_v),
                        &s,
                        default_truncation(n as i64),
                    )
                    .unwrap()
                    .value;
                    ((n as f64).ln(), v.abs().ln())
                })
                .collect();
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
            sxy / sxx
        };
        let weak = slope_for(0.1);
        let strong = slope_for(0.9);
        assert!((weak - strong).abs() < 0.03, "slopes {weak} vs {strong}");
    }

    #[test]
    fn sample_ccf_self_correlation_is_one() {
        let x: Vec<f64> = (0..256).map(|i| ((i * 37 % 101) as f64).sin()).collect();
        let curve = sample_cross_correlation_xy(&x, &x, 8).unwrap();
        let at0 = curve.values()[curve.lags().iter().position(|&l| l == 0).unwrap()];
        assert!((at0 - 1.0).abs() < 1e-12);
        assert!(curve.values().iter().all(|v| v.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn sample_ccf_reversal_symmetry() {
        let x: Vec<f64> = (0..500).map(|i| ((i * 13 % 89) as f64).cos()).collect();
        let y: Vec<f64> = (0..500).map(|i| ((i * 29 % 97) as f64).sin()).collect();
        let xy = sample_cross_correlation_xy(&x, &y, 20).unwrap();
        let yx = sample_cross_correlation_xy(&y, &x, 20).unwrap();
        for (i, &lag) in xy.lags().iter().enumerate() {
            let j = yx.lags().iter().position(|&l| l == -lag).unwrap();
            assert_eq!(xy.values()[i], yx.values()[j], "lag {lag}");
        }
    }

    #[test]
    fn sample_ccf_rejects_degenerate_inputs() {
        let c = vec![1.0; 100];
        let x: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert!(matches!(
            sample_cross_correlation_xy(&c, &x, 5),
            Err(Error::DegenerateInput(_))
        ));
        assert!(sample_cross_correlation_xy(&x, &x, 25).is_err()); // max_lag >= N/4
    }

    #[test]
    fn sample_ccf_of_independent_noise_stays_in_gaussian_band() {
        // Over 100 seeds, at least 99% of lags 1..=100 inside +-4/sqrt(N).
        use crate::arfima::{simulate_arfima_pair, SimulationConfig};
        let s = spec(1.0, 1.0, 0.0);
        let n = 1 << 15;
        let bound = 4.0 / (n as f64).sqrt();
        let mut total = 0usize;
        let mut inside = 0usize;
        for seed in 0..100u64 {
            let cfg = SimulationConfig::with_burn_in(n, n, seed).unwrap();
            let pair = simulate_arfima_pair(d(0.0), d(0.0), &s, &cfg);
            let lags: Vec<i64> = (1..=100).collect();
            let (vals, _) = sample_ccf_at_lags(pair.x(), pair.y(), &lags, 100).unwrap();
            total += vals.len();
            inside += vals.iter().filter(|v| v.abs() < bound).count();
        }
        assert!(
            inside as f64 >= 0.99 * total as f64,
            "{inside}/{total} inside the band"
        );
    }

    #[test]
    fn quadrature_recovers_exact_ccf_from_spectrum() {
        // Smoke version of the full consistency run in the acceptance
        // suite: invert the closed-form spectrum numerically at a few lags.
        let s = spec(1.0, 1.0, 0.5);
        let d1 = d(0.3);
        let d2 = d(0.1);
        let sx = process_std(&ProcessSpec::Arfima(d1), 1.0).unwrap();
        let sy = process_std(&ProcessSpec::Arfima(d2), 1.0).unwrap();
        for n in [0i64, 1, 5] {
            let gamma_n = ccf_from_spectrum_quadrature(
                |lam| cross_spectrum_arfima(d1, d2, &s, lam).unwrap(),
                n,
                4000,
            );
            let exact = exact_cross_correlation_arfima(n, d1, d2, &s, 1_000_000)
                .unwrap()
                .value;
            assert!(
                rel(gamma_n / (sx * sy), exact) < 0.01,
                "n = {n}: {} vs {exact}",
                gamma_n / (sx * sy)
            );
        }
    }

    #[test]
    fn curve_invariants_enforced() {
        assert!(CrossCorrelationCurve::new(
            vec![1, 1, 2],
            vec![0.1, 0.2, 0.3],
            CurveKind::ExactTruncated,
            (1.0, 1.0)
        )
        .is_err());
        assert!(CrossCorrelationCurve::new(
            vec![1, 2],
            vec![0.1, 1.5],
            CurveKind::Sample,
            (1.0, 1.0)
        )
        .is_err());
        assert!(CrossCorrelationCurve::new(
            vec![1, 2],
            vec![0.1, 1.5],
            CurveKind::ExactTruncated,
            (1.0, 1.0)
        )
        .is_ok());
        assert!(SpectrumPoint::new(0.0, Complex64::new(1.0, 0.0)).is_err());
        assert!(SpectrumPoint::new(3.2, Complex64::new(1.0, 0.0)).is_err());
    }
}
