//! Command-line driver for `qst-core`: configuration, sweeps and the CSV,
//! JSON and SVG outputs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod settings;

pub use config::{parse_config, CommandKind, RunConfig};
pub use error::CliError;
pub use run::{execute, main_with_args};
