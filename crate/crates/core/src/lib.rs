//! Levy-flight single-point optimization with a dynamical archive.
//!
//! The crate provides the Yi optimizer ([`yi`]), a catalog of shifted and
//! rotated benchmark objectives ([`objectives`]), comparison optimizers
//! ([`baselines`]) and an experiment harness with summary statistics,
//! Welch t-tests, published-result comparison, timing measurement and
//! parameter sweeps ([`harness`]).
//!
//! ```
//! use yiopt::{yi_optimize, BaseFunction, ObjectiveSpec, SearchSpace, YiConfig};
//!
//! let spec = ObjectiveSpec::seeded(BaseFunction::Sphere, SearchSpace::standard(2)?, 1, 0.2)?;
//! let mut cfg = YiConfig::for_dim(2, 7);
//! cfg.max_fe = 2_000;
//! let result = yi_optimize(cfg, &spec)?;
//! assert!(result.evals_used <= 2_000);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod baselines;
pub mod harness;
pub mod objectives;
pub mod rng;
pub mod run;
pub mod yi;

pub use baselines::{
    de_optimize, pso_optimize, random_search, sa_optimize, BaselineError, DEConfig, PSOConfig,
    SAConfig,
};
pub use objectives::{
    eval_base, BaseFunction, EvaluationCounter, ObjectiveDescriptor, ObjectiveError, ObjectiveSpec,
    SearchSpace,
};
pub use rng::{RandomSource, RngError, StableParams};
pub use run::{repair, CurvePoint, RunResult, Scored, TrackedObjective};
pub use yi::{yi_optimize, YiConfig, YiError, YiState};
