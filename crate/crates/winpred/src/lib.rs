//! File formats, sweeps and command-line plumbing around `winpred-core`.

pub mod csvio;
pub mod error;
pub mod grid;
pub mod model;
pub mod reports;
pub mod sweep;
pub mod vectors;

pub use error::{Error, Result};
