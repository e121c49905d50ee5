//! Experiment runner for the kinetic exchange models: strict configs, named
//! presets, ensemble execution and CSV/JSON artifacts.

pub mod analyze;
pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod presets;

pub use error::{CliError, ConfigError};
pub use experiment::{run_experiment, Experiment, ExperimentReport};
pub use presets::{run_preset, Preset};
