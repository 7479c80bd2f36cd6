//! Command-line front end for `jlfiltration-core`: problem files, reports,
//! and the oracle-backed verification harness.

pub mod app;
pub mod error;
pub mod problem;
pub mod report;
pub mod verify;

pub use app::run;
pub use error::{CliError, ErrorRecord};
pub use problem::ProblemFile;
pub use report::Document;
pub use verify::{run_verify, VerifyConfig, VerifyReport};
