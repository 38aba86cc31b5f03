//! Experiment harness for cross-correlated memory processes: single
//! reported runs, parameter-grid Monte Carlo sweeps with derived seeds, and
//! machine-checkable claim verification over sweep outputs.

pub mod claims;
pub mod config;
pub mod single;
pub mod sweep;
