//! Command-line front end for the `tepwp` speech enhancer.
//!
//! Subcommands: `enhance` a WAV file, `evaluate` a grid of inputs, noise
//! types, SNRs and methods into a CSV report, `analyze` subband statistics,
//! and `gen` synthetic test signals.

pub mod analyze;
pub mod commands;
pub mod config;
pub mod error;
pub mod evaluate;
pub mod source;
pub mod wav;

pub use commands::{run, Cli};
pub use config::{Method, Overrides, RunConfig};
pub use error::{CliError, CliResult};
