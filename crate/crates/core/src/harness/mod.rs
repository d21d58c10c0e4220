//! Experiment batches, claim sampling, statistics and CSV records.

pub mod claims;
pub mod experiment;
pub mod record;
pub mod seeds;
pub mod stats;
pub mod tables;

pub use claims::{claim_search, Claim, ClaimSummary};
pub use experiment::{
    run_experiment, run_experiment_with, run_trial, trial_config, AlgoPlan, ConfigError, Experiment, SharedParams, TaskPlan,
};
pub use record::{read_csv, write_csv, RecordError, TrialRecord, CSV_HEADER};
pub use stats::{summarize, t_confidence, GroupSummary, StatsError};
pub use tables::{TableError, TaskFamily};
