//! Support library for the `cumdev` binary: CSV ingestion with tie
//! perturbation, batch screening, and the usage/data error split.

pub mod errors;
pub mod io;
pub mod screen;
