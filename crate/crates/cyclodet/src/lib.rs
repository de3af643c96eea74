//! Range sweeps, report formats, the result cache and the command-line
//! front end over `cyclodet-core`.

pub mod cache;
pub mod cli;
pub mod report;
pub mod runner;

pub use cyclodet_core as core;
