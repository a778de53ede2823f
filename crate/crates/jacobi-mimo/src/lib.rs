//! Host-side companion to `jacobi-mimo-core`: a shared quadrature rule
//! cache, parallel Monte Carlo, CSV output and the command implementations
//! behind the `jacobi-mimo` binary.

pub mod cache;
pub mod commands;
pub mod csv;
pub mod error;
pub mod parallel;

pub use cache::RuleCache;
pub use commands::{
    cmd_bench, cmd_density, cmd_sweep, cmd_validate, BenchComparison, BenchSpec, BenchmarkRecord,
    DensitySpec, Output, SnrGrid, SweepSpec, ValidateSpec, ValidationReport, Z_LIMIT,
};
pub use error::{Error, Result};
pub use jacobi_mimo_core as core;
