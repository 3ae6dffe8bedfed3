//! IO side of `fermijordan-core`: coupling files, seeded random couplings,
//! table and JSON reports, and the command implementations behind the
//! `fermijordan` binary.

pub mod commands;
pub mod couplings;
pub mod error;
pub mod report;

pub use commands::{
    analyze, qbin, verify, AnalysisRequest, CouplingSource, Outcome, SectorSelection,
};
pub use error::CliError;
