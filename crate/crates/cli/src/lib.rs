//! Scenario parsing and task execution behind the `qmaxent` binary.

pub mod expr;
pub mod run;
pub mod scenario;

pub use run::{run_scenario, RunError, RunOptions};
pub use scenario::{parse_scenario, Builtin, ParseError, PathSpec, ScenarioSpec, Task};

/// Exit status for a failed computation.
pub const EXIT_SOLVER: u8 = 2;
/// Exit status for an unreadable scenario or command line.
pub const EXIT_PARSE: u8 = 3;
