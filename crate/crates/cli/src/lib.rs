//! Command-line driver for the nilpotent quotient engine.

pub mod harness;
pub mod job;
