//! Experiment drivers behind the `iqoap` binary.

pub mod builtin;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
