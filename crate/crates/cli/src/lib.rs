//! Command-line front end for `tenuniq`: argument parsing, factor-file
//! ingestion, command dispatch and report rendering.

pub mod args;
pub mod commands;
pub mod error;
pub mod factor_file;
pub mod report;

pub use args::{Cli, Command, Format};
pub use commands::run;
pub use error::CliError;
pub use factor_file::{Entry, FactorFile};
pub use report::{Output, ReportEnvelope};

/// Version string recorded in every report.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
