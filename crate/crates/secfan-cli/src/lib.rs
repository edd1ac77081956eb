//! File-driven workbench around the `secfan` engine: a plain-text input
//! format, deterministic key/value reports, and one subcommand per stage of
//! the pipeline. See `docs/format.md` for the grammar and the report
//! conventions.

pub mod commands;
pub mod input;
pub mod report;

pub use commands::{run_command, CmdError, Opts, SUBCOMMANDS};
pub use input::{emit, parse_input, ParseError, WorkbenchInput};
pub use report::Report;
