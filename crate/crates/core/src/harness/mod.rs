//! Experiment orchestration, statistics and reporting.

pub mod compare;
pub mod config;
pub mod experiment;
pub mod published;
pub mod report;
pub mod stats;
pub mod sweep;
pub mod timing;

use std::path::PathBuf;

use thiserror::Error;

use crate::baselines::BaselineError;
use crate::objectives::ObjectiveError;
use crate::yi::YiError;

pub use compare::{wtl_table, WtlTable};
pub use config::{
    DEParams, ExperimentConfig, FunctionEntry, OptimizerSpec, PSOParams, SAParams, YiParams,
};
pub use experiment::{run_experiment, CellResult, RunRecord};
pub use published::{
    comparison_moments, published_marks, yi_published, PublishedBaseline, PUBLISHED_RUNS,
};
pub use report::{emit_report, load_json, load_records, load_results, ReportFormat};
pub use stats::{
    summarize, welch_t_test_summary, ComparisonOutcome, SampleMoments, StatsSummary, Verdict,
};
pub use sweep::{parameter_sweep, SweepConfig, SweepRow, SweepVariant};
pub use timing::{measure_time_complexity, measure_with, TimingOptions, TimingReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("summary of an empty sample")]
    EmptyInput,
    #[error("t-test needs at least two runs per side, got {a} and {b}")]
    InsufficientSamples { a: usize, b: usize },
    #[error("function sets differ: missing on our side {missing_ours:?}, missing on their side {missing_theirs:?}")]
    KeyMismatch {
        missing_ours: Vec<String>,
        missing_theirs: Vec<String>,
    },
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error(transparent)]
    Yi(#[from] YiError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
}

impl HarnessError {
    /// Whether the failure stems from user-supplied configuration rather than
    /// from running it.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            HarnessError::Config(_)
                | HarnessError::KeyMismatch { .. }
                | HarnessError::Yi(YiError::InvalidConfig(_))
                | HarnessError::Baseline(BaselineError::InvalidConfig(_))
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}
