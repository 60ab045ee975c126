//! Command-line front end: single classifications, cached parameter
//! sweeps, theorem verification and graph export.

pub mod cache;
pub mod commands;
pub mod error;
pub mod expect;
pub mod render;
pub mod sweep;

/// Recorded in every cache line; records from other versions are ignored.
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
