//! Configuration, scenario execution and result files for the `sgcrack`
//! command-line tool.
//!
//! A [`config::RunConfig`] is read from flat dotted-key TOML, resolved into
//! solver parameters, and executed by one of the scenario drivers in
//! [`scenario`], which write CSV results, a manifest and diagnostics via
//! [`output`].

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod scenario;

pub use config::{ConfigError, RunConfig};
pub use scenario::{convergence_study, oracle_check, run_scenario, sweep, Thresholds};
