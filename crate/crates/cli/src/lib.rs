//! Library side of the `axisym` command: argument types, commands and output files.

pub mod args;
pub mod commands;
pub mod output;
