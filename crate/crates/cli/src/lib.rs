//! Model files, reports and command workflows behind the `kropina` binary.

pub mod cli;
pub mod commands;
pub mod model_file;
pub mod render;

pub use cli::{run, Cli};
pub use commands::{CliError, Exit};
pub use model_file::{load_model, parse_model, read_model, save_model, LoadError};
