//! Library side of the `symprune` command: output formats and the solve
//! driver.

pub mod boxfile;
pub mod classes;
pub mod error;
pub mod hexfloat;
pub mod record;
pub mod report;
pub mod run;

pub use error::CliError;
