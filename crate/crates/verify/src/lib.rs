//! Verification suites for mth-order projection-body inequalities, and the
//! `verify` command line.

// `!(x > 0.0)` is used deliberately to reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod catalog;
pub mod cli;
pub mod config;
pub mod report;
pub mod suites;

pub use catalog::Catalog;
pub use config::{ConfigError, Suite, SuiteConfig, Tolerance};
pub use report::{Check, Relation, SuiteReport, Verdict};
pub use suites::run_suite;
