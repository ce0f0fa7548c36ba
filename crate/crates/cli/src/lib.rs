//! Library surface of the `corrdist` command-line tool: document parsing,
//! report rendering, and the subcommand implementations. The binary in
//! `main.rs` is a thin argv-to-exit-code wrapper around this.

pub mod commands;
pub mod input;
pub mod report;

pub use commands::{CliError, FunctionalKind};
pub use report::Format;
