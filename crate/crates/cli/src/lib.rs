//! The `cdga` command-line tool: model files, the expression language and
//! command dispatch. Every command prints one JSON document.

pub mod commands;
pub mod expr;
pub mod model_file;

pub use commands::{run, Cli, CliError, Command, Output};
