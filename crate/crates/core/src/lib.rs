//! Simulation and cross-correlation analysis of long- and short-memory
//! process pairs with correlated innovations.
//!
//! The crate covers one tightly scoped pipeline:
//!
//! 1. [`arfima`] — generate pairs of fractionally differenced (long-memory)
//!    and AR(1) (short-memory) sample paths whose only coupling is the
//!    contemporaneous covariance of their Gaussian innovations;
//! 2. [`xcorr`] — evaluate the cross-correlation structure of such pairs
//!    exactly (truncated series with tail bounds), asymptotically (closed
//!    hyperbolic forms), from the closed-form cross-spectrum, and
//!    empirically from sample paths;
//! 3. [`hurst`] — estimate the bivariate Hurst exponent from lag-domain
//!    decay or from the cross-periodogram, and convert between the
//!    `H`/`d`/`gamma` parameterizations;
//! 4. [`io`] — CSV round-tripping for all of the above.
//!
//! Everything is pure and deterministic given `(configuration, seed)`:
//! values are plain data, safe to share across threads, and repeated runs
//! produce identical bytes.

pub mod arfima;
pub mod error;
pub mod hurst;
pub mod io;
pub mod seed;
pub mod special;
mod util;
pub mod xcorr;

pub use arfima::{
    ArCoefficient, FracDiffOrder, InnovationSpec, PairKind, SeriesMeta, SeriesPair,
    SimulationConfig,
};
pub use error::{Error, Result};
pub use hurst::{EstimatorMethod, HurstEstimate, HurstRelation};
pub use xcorr::{CrossCorrelationCurve, CurveKind, ProcessSpec, SpectrumPoint, TruncatedCcf};
