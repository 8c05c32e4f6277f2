//! File formats, configuration, the thread-pool executor and the experiment
//! runner behind the `purifier` CLI.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod dataset_io;
mod error;
pub mod exec;
pub mod svg;
pub mod sweep;

pub use error::{ErrorCategory, HarnessError, Result};

/// Version stamped into every JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;
