use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use crossmem::arfima::{ArCoefficient, FracDiffOrder, PairKind};
use crossmem::hurst::{default_ccf_window, default_periodogram_bandwidth, estimate_hxy_ccf_decay};
use crossmem::io::{read_series_csv, write_curve_csv, write_estimates_csv, write_spectrum_csv};
use crossmem::xcorr::{
    cross_spectrum_arfima, cross_spectrum_arfima_ar, sample_cross_correlation_xy, SpectrumPoint,
};
use crossmem::InnovationSpec;
use crossmem_cli::claims::verify_claims;
use crossmem_cli::config::SweepConfig;
use crossmem_cli::single::{run_single, SingleConfig};
use crossmem_cli::sweep::{read_sweep_csv, run_sweep, write_sweep_csv};
use std::f64::consts::PI;
use std::path::PathBuf;

/// Simulation, analysis and Monte Carlo verification of cross-correlated
/// long- and short-memory process pairs.
#[derive(Parser)]
#[command(name = "crossmem", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one pair and write series, sample CCF, estimates and
    /// analytic curves into an output directory.
    Simulate(SimulateArgs),
    /// Compute the sample cross-correlation of a series CSV.
    Xcorr(XcorrArgs),
    /// Dump the analytic cross-spectrum on the Fourier grid of length n.
    Spectrum(SpectrumArgs),
    /// Estimate the bivariate Hurst exponent from a series CSV.
    Estimate(EstimateArgs),
    /// Run a parameter-grid Monte Carlo sweep from a config file.
    Sweep(SweepArgs),
    /// Check the theoretical claims against a sweep result CSV.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ProcessArgs {
    /// Fractional differencing order of the first series.
    #[arg(long, allow_hyphen_values = true)]
    d1: f64,
    /// Fractional differencing order of the second series.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "theta")]
    d2: Option<f64>,
    /// AR(1) coefficient of the second series (instead of --d2).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Innovation variance of the first series.
    #[arg(long, default_value_t = 1.0)]
    sigma_e2: f64,
    /// Innovation variance of the second series.
    #[arg(long, default_value_t = 1.0)]
    sigma_v2: f64,
    /// Innovation covariance (the sole source of cross-correlation).
    #[arg(long, allow_hyphen_values = true)]
    sigma_ev: f64,
}

impl ProcessArgs {
    fn kind(&self) -> Result<PairKind> {
        let d1 = FracDiffOrder::new(self.d1)?;
        match (self.d2, self.theta) {
            (Some(d2), None) => Ok(PairKind::ArfimaArfima {
                d1,
                d2: FracDiffOrder::new(d2)?,
            }),
            (None, Some(theta)) => Ok(PairKind::ArfimaAr {
                d1,
                theta: ArCoefficient::new(theta)?,
            }),
            (None, None) => bail!("one of --d2 or --theta is required"),
            (Some(_), Some(_)) => bail!("--d2 and --theta are mutually exclusive"),
        }
    }

    fn innovations(&self) -> Result<InnovationSpec> {
        Ok(InnovationSpec::new(
            self.sigma_e2,
            self.sigma_v2,
            self.sigma_ev,
        )?)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    process: ProcessArgs,
    /// Sample length.
    #[arg(long, default_value_t = 1 << 16)]
    n: usize,
    /// Burn-in length (default max(n, 16384)).
    #[arg(long)]
    burn_in: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest sample-CCF lag (default: upper edge of the fit window).
    #[arg(long)]
    max_lag: Option<usize>,
    /// Lag-domain fit window as `lo,hi`.
    #[arg(long, value_parser = parse_window)]
    window: Option<(u64, u64)>,
    /// Cross-periodogram bandwidth (default floor(sqrt(n))).
    #[arg(long)]
    m: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct XcorrArgs {
    /// Input series CSV (header `x,y`).
    input: PathBuf,
    #[arg(long, default_value_t = 256)]
    max_lag: usize,
    /// Output CCF CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    process: ProcessArgs,
    /// Grid resolution: evaluates at lambda_j = 2 pi j / n, j = 1..n/2.
    #[arg(long, default_value_t = 4096)]
    n: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    /// Input series CSV (header `x,y`).
    input: PathBuf,
    /// Lag-domain fit window as `lo,hi` (default 10,min(n/50,1000)).
    #[arg(long, value_parser = parse_window)]
    window: Option<(u64, u64)>,
    /// Cross-periodogram bandwidth (default floor(sqrt(n))).
    #[arg(long)]
    m: Option<usize>,
    /// Optional output CSV for the estimates.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep configuration file (key = value lines).
    config: PathBuf,
    /// Worker threads (1 = serial, 0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output CSV (overrides `out` from the config file).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of replicas per cell (overrides the config file).
    #[arg(long)]
    replicas: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Sweep result CSV.
    input: PathBuf,
}

fn parse_window(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected lo,hi — got '{s}'"))?;
    let lo = lo.trim().parse().map_err(|e| format!("bad lo: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("bad hi: {e}"))?;
    if lo >= hi {
        return Err(format!("window lower bound {lo} must be below {hi}"));
    }
    Ok((lo, hi))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate(args) => {
            let cfg = SingleConfig {
                kind: args.process.kind()?,
                innovations: args.process.innovations()?,
                n: args.n,
                burn_in: args.burn_in,
                seed: args.seed,
                max_lag: args.max_lag,
                window: args.window,
                m: args.m,
                out_dir: args.out,
            };
            run_single(&cfg)?.print();
            Ok(())
        }
        Command::Xcorr(args) => {
            let (x, y) = read_series_csv(&args.input)?;
            let curve = sample_cross_correlation_xy(&x, &y, args.max_lag)?;
            write_curve_csv(&curve, &args.out)?;
            println!("wrote {}", args.out.display());
            Ok(())
        }
        Command::Spectrum(args) => {
            let spec = args.process.innovations()?;
            let kind = args.process.kind()?;
            if args.n < 4 {
                bail!("--n must be at least 4");
            }
            let points: Result<Vec<SpectrumPoint>> = (1..=args.n / 2)
                .map(|j| {
                    let lambda = (2.0 * PI * j as f64 / args.n as f64).min(PI);
                    let value = match kind {
                        PairKind::ArfimaArfima { d1, d2 } => {
                            cross_spectrum_arfima(d1, d2, &spec, lambda)?
                        }
                        PairKind::ArfimaAr { d1, theta } => {
                            cross_spectrum_arfima_ar(d1, theta, &spec, lambda)?
                        }
                    };
                    Ok(SpectrumPoint::new(lambda, value)?)
                })
                .collect();
            write_spectrum_csv(&points?, &args.out)?;
            println!("wrote {}", args.out.display());
            Ok(())
        }
        Command::Estimate(args) => {
            let (x, y) = read_series_csv(&args.input)?;
            let n = x.len();
            let window = args.window.unwrap_or_else(|| default_ccf_window(n));
            let m = args.m.unwrap_or_else(|| default_periodogram_bandwidth(n));
            let mut ok = Vec::new();
            match crossmem::hurst::cross_periodogram_estimate(&x, &y, m) {
                Ok(e) => {
                    println!(
                        "cross_periodogram  H_xy = {:.4} (slope stderr {:.4}, {} points)",
                        e.h_xy, e.slope_stderr, e.n_points
                    );
                    ok.push(e);
                }
                Err(e) => println!("cross_periodogram  failed: {e}"),
            }
            let ccf = sample_cross_correlation_xy(&x, &y, window.1 as usize)
                .and_then(|curve| estimate_hxy_ccf_decay(&curve, window));
            match ccf {
                Ok(e) => {
                    println!(
                        "ccf_decay          H_xy = {:.4} (slope stderr {:.4}, {} points)",
                        e.h_xy, e.slope_stderr, e.n_points
                    );
                    ok.push(e);
                }
                Err(e) => println!("ccf_decay          failed: {e}"),
            }
            if let Some(out) = args.out {
                write_estimates_csv(&ok, &out)?;
                println!("wrote {}", out.display());
            }
            if ok.is_empty() {
                bail!("no estimator produced a result");
            }
            Ok(())
        }
        Command::Sweep(args) => {
            let text = std::fs::read_to_string(&args.config)
                .with_context(|| format!("reading config {}", args.config.display()))?;
            let mut cfg = SweepConfig::parse(&text)?;
            if let Some(r) = args.replicas {
                cfg.replicas = r;
            }
            let out = args
                .out
                .or_else(|| cfg.out.clone())
                .ok_or_else(|| anyhow!("no output path: pass --out or set `out` in the config"))?;
            let result = run_sweep(&cfg, args.jobs)?;
            write_sweep_csv(&result, &out)?;
            println!(
                "wrote {} ({} cells x {} estimator(s), {} replicas)",
                out.display(),
                result.cells.len() / cfg.estimators.len(),
                cfg.estimators.len(),
                cfg.replicas
            );
            Ok(())
        }
        Command::Verify(args) => {
            let result = read_sweep_csv(&args.input)?;
            let report = verify_claims(&result);
            for line in &report.lines {
                println!("{line}");
            }
            let failed = report.lines.iter().filter(|l| !l.pass).count();
            if failed > 0 {
                bail!("{failed}/{} claims failed", report.lines.len());
            }
            println!("all {} claims passed", report.lines.len());
            Ok(())
        }
    }
}
