//! Git history extraction, file formats, timing and the `cochange` command
//! line around the `cochange-core` miners.

pub mod cli;
pub mod error;
pub mod format;
pub mod history;
pub mod jsonl;
pub mod parallel;
pub mod report;
pub mod synth;
pub mod timing;

pub use error::{Error, Result};
