//! Experiment driver for `minibatch-core`: dataset generation, probability
//! caching, experiment grids and assumption checks. The `minibatch` binary is
//! a thin clap front end over these modules.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod gen;
pub mod grid;
pub mod manifest;
pub mod plot;
pub mod probs;
pub mod validate;

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
