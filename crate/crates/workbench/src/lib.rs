//! Instance generators, experiment configs and parallel sweeps over the
//! core library, plus the `aal` command-line front end.

pub mod config;
pub mod error;
pub mod generators;
pub mod ops;
pub mod sweep;

pub use config::{ExperimentConfig, Format, GeneratorSpec, Instance, OutputSpec};
pub use error::{Result, WorkbenchError};
pub use ops::{evaluate, EvalContext, Evaluation, OperationSpec};
pub use sweep::{run_experiment, sweep, SweepRecord, SweepResult};
