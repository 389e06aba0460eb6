//! Experiment harnesses, file IO and the `trplab` command line for the
//! triangle-removal-process workspace. All algorithmic substance lives in
//! `trp-core`; this crate adds reproducible Monte Carlo drivers, JSON/CSV
//! artifacts and the CLI.

pub mod cli;
pub mod experiments;
pub mod io;
pub mod manifest;
