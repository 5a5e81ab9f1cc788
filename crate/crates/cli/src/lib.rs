//! File formats and subcommands behind the `cecot` binary.

pub mod commands;
pub mod error;
pub mod format;

pub use commands::{cmd_certify, cmd_ext, cmd_random, cmd_verify, exit_code};
pub use error::CliError;
pub use format::{InstanceFile, ReportFile};
