//! Batch front end for the `symdisc` membership tests: point files in and
//! out, β-reduction chains, membership grids, seeded corpora and timings.

pub mod commands;
pub mod config;
pub mod grid;
pub mod records;
pub mod sample;

pub use config::{OutputFormat, RunConfig};
