//! Files, reports, random-state experiments and the command line for
//! `tensnorm-core`.

pub mod cli;
pub mod error;
pub mod experiment;
pub mod io;
pub mod report;

pub use error::{CliError, Result};
