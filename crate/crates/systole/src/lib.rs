//! Command-line front end for `systole-core`: the form-spec language, JSON
//! run records, CSV history export and a rayon driver for the search shards.

pub mod commands;
pub mod json;
pub mod parallel;
pub mod spec;

pub use commands::{CommandError, RunRecord};
pub use spec::{FormSpec, ParseError};
