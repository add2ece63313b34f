//! Configuration and output formats of the `diracwire` command.

pub mod config;
pub mod output;
