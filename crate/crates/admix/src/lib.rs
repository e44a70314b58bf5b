//! Threads, file formats and the command line around `admix-core`.

pub mod constraints;
pub mod error;
pub mod parallel;
pub mod report;

pub use error::{Error, Result};
