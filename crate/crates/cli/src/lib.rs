//! Command-line front end for `qwrca`: config ingestion, CSV/JSON output,
//! sweeps and the verify suite.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod sweep;

pub use config::{Format, Initial, Mode, RunConfig, SweepConfig};
pub use error::{CliError, CliResult};
pub use run::{Report, TrajectoryRecord};
