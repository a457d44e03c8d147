//! Library side of the `realvar` command line tool: input parsing, report
//! rendering, JSON serialization and the embedded benchmark corpus. The
//! binary and the acceptance tests share everything here.

pub mod corpus;
pub mod json;
pub mod parse;
pub mod render;

pub use parse::{parse_system, print_system, ParseError};
