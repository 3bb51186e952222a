//! Scenario files, output formats, parallel evaluation and the commands
//! behind the `risray` binary.

pub mod commands;
pub mod config;
pub mod formats;
pub mod parallel;
