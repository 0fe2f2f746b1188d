//! IO, file formats and the certification suite around `darboux-core`.
//!
//! The `darboux` binary is a thin clap layer over these modules.

pub mod error;
pub mod grid;
pub mod params;
pub mod report;
pub mod suite;

pub use error::CliError;
