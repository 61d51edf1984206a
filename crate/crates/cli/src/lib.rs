//! Command-line front end: expression parsing and JSON reports.

pub mod commands;
pub mod expr;

pub use commands::{run, Cli, Outcome};
pub use expr::{parse_multiderivation, parse_polynomial, ParseError};
