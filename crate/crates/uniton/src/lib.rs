//! JSON formats and the command-line driver around `uniton-core`.

pub mod cli;
pub mod json;
