//! File formats, a rayon executor and the `lelonglab` command line on top of
//! [`lelonglab_core`].
//!
//! Currents are stored as JSON; schedules and sweeps are written as CSV; the
//! leaf and ν plots are SVG. Every output is deterministic for a fixed input.

pub mod cli;
pub mod error;
pub mod format;
pub mod output;
pub mod pool;

pub use error::CliError;
