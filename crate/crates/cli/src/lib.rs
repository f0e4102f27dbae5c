//! Batch front end for `pfext`: TOML problem files in, JSON reports out.
//!
//! The binary `pfext` wraps [`pipeline::run`], [`compare::compare`] and
//! [`corpus::run`]; [`acceptance`] evaluates the end-to-end criteria on the
//! embedded corpus.

pub mod acceptance;
pub mod compare;
pub mod corpus;
pub mod exit;
pub mod oracle;
pub mod pipeline;
pub mod problem;
pub mod report;
pub mod summary;

pub use exit::{ExitCode, Failure};
pub use pipeline::{run, Command, Options};
pub use problem::{Overrides, ProblemFile};
pub use report::ReportFile;
