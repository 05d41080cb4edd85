//! Benchmark harness: configuration, reports, parameter tables, property
//! suites, sweeps and the command line built on them.

pub mod cli;
pub mod config;
pub mod params;
pub mod report;
pub mod sweep;
pub mod verify;
