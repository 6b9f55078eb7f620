//! Library surface of the `chainscope` binary: run configuration,
//! analysis dispatch, and the bundled demonstration suite.

pub mod config;
pub mod paper;
pub mod run;

pub use config::{parse_schedule, parse_state_spec, RunConfig, ScheduleSpec};
pub use paper::{run_paper_suite, CaseResult, FaultInjection, PaperReport};
pub use run::{run, EXIT_CASE_FAILURES, EXIT_OK, EXIT_UNDECIDED, EXIT_VALIDATION};
