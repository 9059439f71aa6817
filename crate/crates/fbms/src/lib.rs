//! Command line, reports and file formats around `fbms-core`.
//!
//! Every subcommand builds a [`report::ReportDocument`] and its data files
//! in memory ([`pipeline::execute`]), then writes them with a manifest of
//! checksums ([`pipeline::write_run`]). [`verify`] holds the acceptance
//! suite that `verify-all` runs.

pub mod cli;
pub mod config;
mod error;
pub mod export;
pub mod pipeline;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
