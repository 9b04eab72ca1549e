//! Experiment harness for `robust-submod`: config parsing, dataset loaders,
//! synthetic instances, the experiment runner and the verification suites.

pub mod config;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod instance;
pub mod synth;
pub mod testbed;
pub mod verify;

pub use config::{ExperimentConfig, Overrides};
pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, Experiment, ExperimentReport, Row};
pub use instance::Instance;
