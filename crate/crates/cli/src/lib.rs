//! Command-line frontend for the pearly and Hamiltonian complexes.

pub mod report;
pub mod run;
pub mod svg;

pub use run::{main_with, run, Cli, CliError, Outcome};
