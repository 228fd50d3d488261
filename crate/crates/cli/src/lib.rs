//! Scenario files, CSV output and the `mempart` command line.

pub mod app;
pub mod csv;
pub mod scenario;

pub use app::{run, Cli, CliError};
pub use scenario::{ParseError, ScenarioFile};
