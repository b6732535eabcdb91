//! Configuration, presets, output writers and the drivers behind the command-line tool.

pub mod config;
pub mod convergence;
pub mod output;
pub mod presets;
pub mod run;
pub mod verify;

pub use config::{RunConfig, OUTPUT_DIR_ENV};
pub use convergence::{convergence, write_convergence_csv, ConvergenceTable, LevelResult};
pub use output::{read_snapshot, write_snapshot, MonitorWriter, RunSummary};
pub use presets::{initial_state, PresetId};
pub use run::{build_simulation, run, RunError};
pub use verify::{run_suite, Check, SuiteId, SuiteReport, VerifyOptions};
