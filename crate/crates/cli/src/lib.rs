//! Front end for the `catdyn` binary: input parsing, report envelopes,
//! the seeded test corpus and the self-test runner.

pub mod commands;
pub mod corpus;
pub mod error;
pub mod format;
pub mod input;
pub mod selftest;

pub use error::CliError;
