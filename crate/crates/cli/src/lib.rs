//! Experiment drivers behind the `fweno` command-line tool.

pub mod bench;
pub mod config;
pub mod convergence;
pub mod problems;
pub mod shock;
pub mod two_d;

pub use config::{load_config, parse_config, ConfigError, ExperimentId, ExperimentSpec};

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// A measured quantity missed its acceptance threshold.
    ThresholdFailed,
}
