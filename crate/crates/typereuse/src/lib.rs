//! File formats, the bundled corpus and benchmark, and the command-line
//! front end for `typereuse-core`.

pub mod bench;
pub mod cli;
pub mod corpus;
mod error;
pub mod json;

pub use error::{Error, Result};
