//! File formats and subcommands of the `rankdrop` binary.
//!
//! Exit codes: 0 full rank or success, 2 unreadable or invalid input, 3 a construction
//! failed, 4 the configuration is not rank deficient where it must be, 10 rank deficient,
//! 20 the fuzzer found a classification that disagrees with the rank.

pub mod commands;
pub mod config;
pub mod report;
