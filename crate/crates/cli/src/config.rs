//! Sweep configuration: a flat, line-oriented `key = value` text format.
//!
//! Grammar (one setting per line):
//!
//! ```text
//! # comment lines start with '#'; blank lines are ignored
//! kind       = arfima_arfima | arfima_ar
//! d1         = <list>            # fractional orders of the first series
//! d2         = <list>            # arfima_arfima only
//! theta      = <list>            # arfima_ar only
//! sigma_ev   = <list>            # innovation covariances
//! sigma_e2   = <real>            # default 1
//! sigma_v2   = <real>            # default 1
//! n          = <integer>         # default 65536
//! burn_in    = <integer>         # default max(n, 16384)
//! replicas   = <integer>         # default 100
//! base_seed  = <integer>         # default 1
//! estimators = <list of names>   # cross_periodogram and/or ccf_decay;
//!                                # default cross_periodogram
//! m          = <integer>         # periodogram bandwidth, default floor(sqrt(n))
//! window_lo  = <integer>         # ccf fit window, default 10
//! window_hi  = <integer>         # default min(n/50, 1000)
//! out        = <path>            # default sweep result path
//! ```
//!
//! Lists are comma-separated. Keys may appear at most once; unknown keys
//! are errors. The grid is the cross product of the applicable lists.

use anyhow::{anyhow, bail, Context, Result};
use crossmem::arfima::{ArCoefficient, FracDiffOrder};
use crossmem::hurst::EstimatorMethod;
use crossmem::InnovationSpec;
use std::collections::HashMap;
use std::path::PathBuf;

/// Which process pair a sweep simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    ArfimaArfima,
    ArfimaAr,
}

impl SweepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepKind::ArfimaArfima => "arfima_arfima",
            SweepKind::ArfimaAr => "arfima_ar",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "arfima_arfima" => Some(SweepKind::ArfimaArfima),
            "arfima_ar" => Some(SweepKind::ArfimaAr),
            _ => None,
        }
    }
}

/// Validated sweep description.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub d1: Vec<f64>,
    /// Second fractional order grid (`arfima_arfima`).
    pub d2: Vec<f64>,
    /// AR coefficient grid (`arfima_ar`).
    pub theta: Vec<f64>,
    pub sigma_ev: Vec<f64>,
    pub sigma_e2: f64,
    pub sigma_v2: f64,
    pub n: usize,
    pub burn_in: Option<usize>,
    pub replicas: usize,
    pub base_seed: u64,
    pub estimators: Vec<EstimatorMethod>,
    pub m: Option<usize>,
    pub window: Option<(u64, u64)>,
    pub out: Option<PathBuf>,
}

impl SweepConfig {
    /// Parse and validate the `key = value` text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut seen: HashMap<&str, String> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected 'key = value'", idx + 1))?;
            let key = key.trim();
            let value = value.trim();
            if seen.insert(key_name(key)?, value.to_string()).is_some() {
                bail!("line {}: duplicate key '{key}'", idx + 1);
            }
        }

        let kind_str = seen
            .remove("kind")
            .ok_or_else(|| anyhow!("missing required key 'kind'"))?;
        let kind = SweepKind::parse(&kind_str)
            .ok_or_else(|| anyhow!("unknown kind '{kind_str}' (arfima_arfima | arfima_ar)"))?;

        let real_list = |v: &str, key: &str| -> Result<Vec<f64>> {
            v.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .with_context(|| format!("bad value in '{key}': '{s}'"))
                })
                .collect()
        };

        let d1 = real_list(
            &seen
                .remove("d1")
                .ok_or_else(|| anyhow!("missing required key 'd1'"))?,
            "d1",
        )?;
        let d2 = match seen.remove("d2") {
            Some(v) => real_list(&v, "d2")?,
            None => Vec::new(),
        };
        let theta = match seen.remove("theta") {
            Some(v) => real_list(&v, "theta")?,
            None => Vec::new(),
        };
        let sigma_ev = real_list(
            &seen
                .remove("sigma_ev")
                .ok_or_else(|| anyhow!("missing required key 'sigma_ev'"))?,
            "sigma_ev",
        )?;

        let scalar = |seen: &mut HashMap<&str, String>, key: &str, default: f64| -> Result<f64> {
            match seen.remove(key) {
                Some(v) => v.parse().with_context(|| format!("bad '{key}': '{v}'")),
                None => Ok(default),
            }
        };
        let sigma_e2 = scalar(&mut seen, "sigma_e2", 1.0)?;
        let sigma_v2 = scalar(&mut seen, "sigma_v2", 1.0)?;

        let integer = |seen: &mut HashMap<&str, String>, key: &str| -> Result<Option<u64>> {
            match seen.remove(key) {
                Some(v) => Ok(Some(
                    v.parse().with_context(|| format!("bad '{key}': '{v}'"))?,
                )),
                None => Ok(None),
            }
        };
        let n = integer(&mut seen, "n")?.unwrap_or(1 << 16) as usize;
        let burn_in = integer(&mut seen, "burn_in")?.map(|v| v as usize);
        let replicas = integer(&mut seen, "replicas")?.unwrap_or(100) as usize;
        let base_seed = integer(&mut seen, "base_seed")?.unwrap_or(1);
        let m = integer(&mut seen, "m")?.map(|v| v as usize);
        let window_lo = integer(&mut seen, "window_lo")?;
        let window_hi = integer(&mut seen, "window_hi")?;
        let window = match (window_lo, window_hi) {
            (None, None) => None,
            (lo, hi) => Some((
                lo.ok_or_else(|| anyhow!("window_hi given without window_lo"))?,
                hi.ok_or_else(|| anyhow!("window_lo given without window_hi"))?,
            )),
        };

        let estimators = match seen.remove("estimators") {
            Some(v) => v
                .split(',')
                .map(|s| {
                    EstimatorMethod::parse(s.trim())
                        .ok_or_else(|| anyhow!("unknown estimator '{}'", s.trim()))
                })
                .collect::<Result<Vec<_>>>()?,
            None => vec![EstimatorMethod::CrossPeriodogram],
        };
        let out = seen.remove("out").map(PathBuf::from);

        if let Some(key) = seen.keys().next() {
            bail!("unknown key '{key}'");
        }

        let cfg = SweepConfig {
            kind,
            d1,
            d2,
            theta,
            sigma_ev,
            sigma_e2,
            sigma_v2,
            n,
            burn_in,
            replicas,
            base_seed,
            estimators,
            m,
            window,
            out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicas == 0 {
            bail!("replicas must be >= 1");
        }
        if self.estimators.is_empty() {
            bail!("at least one estimator is required");
        }
        if self.d1.is_empty() || self.sigma_ev.is_empty() {
            bail!("d1 and sigma_ev grids must be nonempty");
        }
        match self.kind {
            SweepKind::ArfimaArfima => {
                if self.d2.is_empty() {
                    bail!("kind arfima_arfima requires a d2 grid");
                }
                if !self.theta.is_empty() {
                    bail!("kind arfima_arfima does not take theta");
                }
                for &v in &self.d2 {
                    FracDiffOrder::new(v).map_err(|e| anyhow!("{e}"))?;
                }
            }
            SweepKind::ArfimaAr => {
                if self.theta.is_empty() {
                    bail!("kind arfima_ar requires a theta grid");
                }
                if !self.d2.is_empty() {
                    bail!("kind arfima_ar does not take d2");
                }
                for &v in &self.theta {
                    ArCoefficient::new(v).map_err(|e| anyhow!("{e}"))?;
                }
            }
        }
        for &v in &self.d1 {
            FracDiffOrder::new(v).map_err(|e| anyhow!("{e}"))?;
        }
        for &ev in &self.sigma_ev {
            InnovationSpec::new(self.sigma_e2, self.sigma_v2, ev).map_err(|e| anyhow!("{e}"))?;
        }
        Ok(())
    }
}

fn key_name(key: &str) -> Result<&'static str> {
    const KEYS: [&str; 16] = [
        "kind",
        "d1",
        "d2",
        "theta",
        "sigma_ev",
        "sigma_e2",
        "sigma_v2",
        "n",
        "burn_in",
        "replicas",
        "base_seed",
        "estimators",
        "m",
        "window_lo",
        "window_hi",
        "out",
    ];
    KEYS.iter()
        .find(|&&k| k == key)
        .copied()
        .ok_or_else(|| anyhow!("unknown key '{key}'"))
}
