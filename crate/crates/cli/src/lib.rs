//! Scenario files, task execution and reports for the `gamp` command.

pub mod error;
pub mod format;
pub mod report;
pub mod scenario;
pub mod tasks;

pub use error::InputError;
pub use report::{Outcome, Report, TaskReport};
pub use scenario::{Scenario, TaskSpec};
pub use tasks::{run_scenario, run_task, run_tasks};
