//! Exact and asymptotic enumeration of constrained admixed arrays.
//!
//! An admixed array is a pair `[A, X]` of `N x 2P` binary matrices: `A`
//! carries local ancestry and `X` allele dosage, with columns `p` and `P + p`
//! forming locus `p`. This crate counts arrays under a row-tally constraint
//! (family A1), a paired-column dosage constraint (family A2) and both at once
//! (family A12), compares the single-constraint families exactly and through
//! an entropy proxy, and evaluates the saddle-point expansion of the doubly
//! constrained count in the semi-regular one-half case.
//!
//! The crate is `no_std` and only needs `alloc`. Threading, file formats and
//! the command line live in the `admix` companion crate.
#![no_std]

extern crate alloc;

pub mod asymptotics;
pub mod bigcount;
pub mod bincount;
pub mod criteria;
pub mod enumerate;
mod error;
pub mod lemmas;
pub mod margins;

pub use bigcount::BigCount;
pub use error::{Error, Result};
pub use margins::{AdmixedArray, Dims, MarginSpec, NormalizedMargins};
