//! Benchmark harness and command-line front end.

mod bench;
mod cli;
mod report;

pub use bench::{draw_case_parameters, run_benchmark, CaseParameters, GENERATION_RETRY_CAP};
pub use cli::{cli_dispatch, CliOutcome};
pub use report::{BenchmarkCase, BenchmarkReport, ReportParseError};
