//! Command-line surface for the gravcat library: single-point reports,
//! parameter sweeps, and canned figure-family recipes, all emitting
//! deterministic CSV (or JSON lines).

pub mod error;
pub mod figures;
pub mod format;
pub mod report;
pub mod sweep;

pub use error::CliError;
