//! Command-line surface for the `homforge` experiments: corpus runs, demos,
//! reflection suites and JSON reports.

pub mod checks;
pub mod commands;
pub mod config;
pub mod demos;
pub mod io;
pub mod report;
