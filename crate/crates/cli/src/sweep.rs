//! Grid sweeps: R replicas per parameter cell, derived seeds, deterministic
//! aggregation.
//!
//! Replicas are the parallel unit. Each replica is pure given its derived
//! seed `split_seed(base_seed, cell_index, replica_index)`, results are
//! stored by `(cell, replica)` index rather than arrival order, and the
//! aggregate CSV is therefore byte-identical between serial and parallel
//! runs of the same configuration.

use crate::config::{SweepConfig, SweepKind};
use anyhow::{anyhow, bail, Context, Result};
use crossmem::arfima::{
    simulate_arfima_ar_pair, simulate_arfima_pair, ArCoefficient, FracDiffOrder, SimulationConfig,
    DEFAULT_MIN_BURN_IN,
};
use crossmem::hurst::{
    combine_hurst, default_ccf_window, default_periodogram_bandwidth, estimate_hxy_ccf_decay,
    estimate_hxy_cross_periodogram, log_spaced_lags, EstimatorMethod,
};
use crossmem::seed::split_seed;
use crossmem::xcorr::{sample_ccf_at_lags, CrossCorrelationCurve, CurveKind};
use crossmem::{InnovationSpec, SeriesPair};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::Path;

/// Parameters of one grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellParams {
    pub d1: f64,
    pub d2: Option<f64>,
    pub theta: Option<f64>,
    pub sigma_ev: f64,
}

/// Aggregated estimates for one `(cell, estimator)` combination.
///
/// `h_values` has exactly one entry per replica, `NaN` marking an estimator
/// failure; `mean`/`std` (population) are over the non-NaN entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CellStat {
    pub cell: usize,
    pub estimator: EstimatorMethod,
    pub params: CellParams,
    pub h_theory: f64,
    pub h_values: Vec<f64>,
    pub successes: usize,
    pub mean: f64,
    pub std: f64,
}

/// Full sweep output plus the shared configuration it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub sigma_e2: f64,
    pub sigma_v2: f64,
    pub n: usize,
    pub burn_in: usize,
    pub replicas: usize,
    pub base_seed: u64,
    pub cells: Vec<CellStat>,
}

/// Cell enumeration order: outer grid first (d1, then d2/theta, then
/// sigma_ev); the linear index doubles as the seed stream index.
pub fn enumerate_cells(cfg: &SweepConfig) -> Vec<CellParams> {
    let mut cells = Vec::new();
    match cfg.kind {
        SweepKind::ArfimaArfima => {
            for &d1 in &cfg.d1 {
                for &d2 in &cfg.d2 {
                    for &ev in &cfg.sigma_ev {
                        cells.push(CellParams {
                            d1,
                            d2: Some(d2),
                            theta: None,
                            sigma_ev: ev,
                        });
                    }
                }
            }
        }
        SweepKind::ArfimaAr => {
            for &d1 in &cfg.d1 {
                for &th in &cfg.theta {
                    for &ev in &cfg.sigma_ev {
                        cells.push(CellParams {
                            d1,
                            d2: None,
                            theta: Some(th),
                            sigma_ev: ev,
                        });
                    }
                }
            }
        }
    }
    cells
}

/// Theoretical bivariate exponent for a cell: the mean of the marginal
/// Hurst exponents (an AR(1) marginal contributes 0.5).
pub fn cell_theory(params: &CellParams) -> f64 {
    let h_x = params.d1 + 0.5;
    let h_y = match params.d2 {
        Some(d2) => d2 + 0.5,
        None => 0.5,
    };
    combine_hurst(h_x, h_y).expect("validated grid values stay in range")
}

fn simulate_cell(
    kind: SweepKind,
    params: &CellParams,
    spec: &InnovationSpec,
    sim: &SimulationConfig,
) -> SeriesPair {
    let d1 = FracDiffOrder::new(params.d1).expect("validated");
    match kind {
        SweepKind::ArfimaArfima => {
            let d2 = FracDiffOrder::new(params.d2.expect("arfima grid")).expect("validated");
            simulate_arfima_pair(d1, d2, spec, sim)
        }
        SweepKind::ArfimaAr => {
            let th = ArCoefficient::new(params.theta.expect("ar grid")).expect("validated");
            simulate_arfima_ar_pair(d1, th, spec, sim)
        }
    }
}

fn estimate_one(pair: &SeriesPair, estimator: EstimatorMethod, cfg: &SweepConfig) -> Option<f64> {
    match estimator {
        EstimatorMethod::CrossPeriodogram => {
            let m = cfg
                .m
                .unwrap_or_else(|| default_periodogram_bandwidth(cfg.n));
            estimate_hxy_cross_periodogram(pair, m).ok().map(|e| e.h_xy)
        }
        EstimatorMethod::CcfDecay => {
            let window = cfg.window.unwrap_or_else(|| default_ccf_window(cfg.n));
            let lags = log_spaced_lags(window.0, window.1, 40);
            let (values, norm) =
                sample_ccf_at_lags(pair.x(), pair.y(), &lags, window.1 as usize).ok()?;
            let curve = CrossCorrelationCurve::new(lags, values, CurveKind::Sample, norm).ok()?;
            estimate_hxy_ccf_decay(&curve, window).ok().map(|e| e.h_xy)
        }
    }
}

/// Run every `(cell, replica)` of the sweep, optionally in parallel.
///
/// `jobs = 1` forces serial execution; `jobs = 0` uses all cores. The
/// output is identical either way.
pub fn run_sweep(cfg: &SweepConfig, jobs: usize) -> Result<SweepResult> {
    cfg.validate()?;
    let cells = enumerate_cells(cfg);
    let burn_in = cfg.burn_in.unwrap_or(cfg.n.max(DEFAULT_MIN_BURN_IN));
    let r = cfg.replicas;

    let tasks: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..r).map(move |rep| (c, rep)))
        .collect();

    let run_replica = |&(c, rep): &(usize, usize)| -> Vec<Option<f64>> {
        let params = &cells[c];
        let spec =
            InnovationSpec::new(cfg.sigma_e2, cfg.sigma_v2, params.sigma_ev).expect("validated");
        let seed = split_seed(cfg.base_seed, c as u64, rep as u64);
        let sim = SimulationConfig::with_burn_in(cfg.n, burn_in, seed).expect("validated");
        let pair = simulate_cell(cfg.kind, params, &spec, &sim);
        cfg.estimators
            .iter()
            .map(|&est| estimate_one(&pair, est, cfg))
            .collect()
    };

    // Indexed collect keeps (cell, replica) order regardless of scheduling.
    let results: Vec<Vec<Option<f64>>> = if jobs == 1 {
        tasks.iter().map(run_replica).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .context("building worker pool")?;
        pool.install(|| tasks.par_iter().map(run_replica).collect())
    };

    let mut stats = Vec::with_capacity(cells.len() * cfg.estimators.len());
    for (c, params) in cells.iter().enumerate() {
        for (e_idx, &estimator) in cfg.estimators.iter().enumerate() {
            let h_values: Vec<f64> = (0..r)
                .map(|rep| results[c * r + rep][e_idx].unwrap_or(f64::NAN))
                .collect();
            let (successes, mean, std) = aggregate(&h_values);
            stats.push(CellStat {
                cell: c,
                estimator,
                params: *params,
                h_theory: cell_theory(params),
                h_values,
                successes,
                mean,
                std,
            });
        }
    }
    Ok(SweepResult {
        kind: cfg.kind,
        sigma_e2: cfg.sigma_e2,
        sigma_v2: cfg.sigma_v2,
        n: cfg.n,
        burn_in,
        replicas: r,
        base_seed: cfg.base_seed,
        cells: stats,
    })
}

/// `(successes, mean, population std)` over the non-NaN entries.
pub fn aggregate(h_values: &[f64]) -> (usize, f64, f64) {
    let ok: Vec<f64> = h_values.iter().copied().filter(|v| !v.is_nan()).collect();
    if ok.is_empty() {
        return (0, f64::NAN, f64::NAN);
    }
    let n = ok.len() as f64;
    let mean = ok.iter().sum::<f64>() / n;
    let var = ok.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (ok.len(), mean, var.sqrt())
}

const SWEEP_HEADER: &str = "cell,estimator,kind,d1,d2,theta,sigma_e2,sigma_v2,sigma_ev,n,burn_in,replicas,base_seed,h_theory,successes,mean,std,h_values";

/// Serialize a sweep result as CSV (one row per cell/estimator; the
/// per-replica estimates live in the final semicolon-joined column).
pub fn sweep_to_csv(result: &SweepResult) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for s in &result.cells {
        let d2 = s.params.d2.map(|v| v.to_string()).unwrap_or_default();
        let theta = s.params.theta.map(|v| v.to_string()).unwrap_or_default();
        let values = s
            .h_values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            s.cell,
            s.estimator.as_str(),
            result.kind.as_str(),
            s.params.d1,
            d2,
            theta,
            result.sigma_e2,
            result.sigma_v2,
            s.params.sigma_ev,
            result.n,
            result.burn_in,
            result.replicas,
            result.base_seed,
            s.h_theory,
            s.successes,
            s.mean,
            s.std,
            values
        );
    }
    out
}

pub fn write_sweep_csv(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, sweep_to_csv(result))
        .with_context(|| format!("writing sweep result to {}", path.display()))
}

/// Parse a sweep result CSV produced by [`write_sweep_csv`].
pub fn read_sweep_csv(path: &Path) -> Result<SweepResult> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading sweep result from {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == SWEEP_HEADER => {}
        other => bail!(
            "unexpected sweep header: {:?}",
            other.map(|s| s.to_string())
        ),
    }
    let mut shared: Option<(SweepKind, f64, f64, usize, usize, usize, u64)> = None;
    let mut cells = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 18 {
            bail!("line {}: expected 18 fields, got {}", idx + 2, fields.len());
        }
        let ctx = |what: &str| format!("line {}: bad {what}", idx + 2);
        let cell: usize = fields[0].parse().with_context(|| ctx("cell"))?;
        let estimator = EstimatorMethod::parse(fields[1])
            .ok_or_else(|| anyhow!("line {}: unknown estimator '{}'", idx + 2, fields[1]))?;
        let kind = SweepKind::parse(fields[2])
            .ok_or_else(|| anyhow!("line {}: unknown kind '{}'", idx + 2, fields[2]))?;
        let d1: f64 = fields[3].parse().with_context(|| ctx("d1"))?;
        let d2 = if fields[4].is_empty() {
            None
        } else {
            Some(fields[4].parse::<f64>().with_context(|| ctx("d2"))?)
        };
        let theta = if fields[5].is_empty() {
            None
        } else {
            Some(fields[5].parse::<f64>().with_context(|| ctx("theta"))?)
        };
        let sigma_e2: f64 = fields[6].parse().with_context(|| ctx("sigma_e2"))?;
        let sigma_v2: f64 = fields[7].parse().with_context(|| ctx("sigma_v2"))?;
        let sigma_ev: f64 = fields[8].parse().with_context(|| ctx("sigma_ev"))?;
        let n: usize = fields[9].parse().with_context(|| ctx("n"))?;
        let burn_in: usize = fields[10].parse().with_context(|| ctx("burn_in"))?;
        let replicas: usize = fields[11].parse().with_context(|| ctx("replicas"))?;
        let base_seed: u64 = fields[12].parse().with_context(|| ctx("base_seed"))?;
        let h_theory: f64 = fields[13].parse().with_context(|| ctx("h_theory"))?;
        let successes: usize = fields[14].parse().with_context(|| ctx("successes"))?;
        let mean: f64 = fields[15].parse().with_context(|| ctx("mean"))?;
        let std: f64 = fields[16].parse().with_context(|| ctx("std"))?;
        let h_values: Vec<f64> = if fields[17].is_empty() {
            Vec::new()
        } else {
            fields[17]
                .split(';')
                .map(|s| s.parse::<f64>().with_context(|| ctx("h_values")))
                .collect::<Result<_>>()?
        };
        match &shared {
            None => shared = Some((kind, sigma_e2, sigma_v2, n, burn_in, replicas, base_seed)),
            Some(s) => {
                if *s != (kind, sigma_e2, sigma_v2, n, burn_in, replicas, base_seed) {
                    bail!("line {}: inconsistent shared sweep fields", idx + 2);
                }
            }
        }
        cells.push(CellStat {
            cell,
            estimator,
            params: CellParams {
                d1,
                d2,
                theta,
                sigma_ev,
            },
            h_theory,
            h_values,
            successes,
            mean,
            std,
        });
    }
    let (kind, sigma_e2, sigma_v2, n, burn_in, replicas, base_seed) =
        shared.ok_or_else(|| anyhow!("sweep CSV has no data rows"))?;
    Ok(SweepResult {
        kind,
        sigma_e2,
        sigma_v2,
        n,
        burn_in,
        replicas,
        base_seed,
        cells,
    })
}
