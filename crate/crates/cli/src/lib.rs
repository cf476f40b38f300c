//! Library side of the `zip3` command-line tool.

pub mod commands;
pub mod config;
pub mod data;
pub mod error;
pub mod report;
