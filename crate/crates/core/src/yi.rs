//! The Yi optimizer.
//!
//! A single search point (the Yi-point) is repeatedly split into `2D` Levy
//! flight candidates `p + alpha * delta`, where `delta` holds one symmetric
//! stable draw per coordinate. The best candidate of each split is archived
//! and adopted as the new incumbent whether or not it improves on it. After
//! `I` splits the incumbent jumps to the best archived point and the archive
//! is emptied.
//!
//! The evaluation budget is cut into `i_max - i_min + 1` equal intervals. On
//! entering each new interval the scope `alpha` (initially `D`) is divided by
//! `sigma` and the archive duration `I` (initially `i_max`) drops by one,
//! bottoming out at `i_min`.
//!
//! Randomness is consumed in a fixed order: `D` uniforms for the initial
//! point, then per candidate `D` stable draws followed by one uniform for each
//! out-of-bound coordinate in ascending order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::objectives::{ObjectiveError, ObjectiveSpec};
use crate::rng::{RandomSource, RngError, StableParams};
use crate::run::{repair, RunResult, Scored, TrackedObjective};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum YiError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error(transparent)]
    Rng(#[from] RngError),
    #[error("archive flush requested on an empty archive")]
    EmptyArchive,
}

/// Yi optimizer settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YiConfig {
    pub i_min: u32,
    pub i_max: u32,
    /// Scope decay factor applied at each interval transition.
    pub sigma: f64,
    /// Stability index of the step distribution.
    pub lambda: f64,
    pub max_fe: u64,
    pub seed: u64,
    pub curve_stride: u64,
}

impl YiConfig {
    pub const DEFAULT_I_MIN: u32 = 6;
    pub const DEFAULT_I_MAX: u32 = 15;
    pub const DEFAULT_SIGMA: f64 = 3.0;
    pub const DEFAULT_LAMBDA: f64 = 1.5;

    /// Defaults for a `dim`-dimensional problem: a budget of `10000 * dim`
    /// evaluations and a curve sample every `100 * dim` evaluations.
    pub fn for_dim(dim: usize, seed: u64) -> Self {
        Self {
            i_min: Self::DEFAULT_I_MIN,
            i_max: Self::DEFAULT_I_MAX,
            sigma: Self::DEFAULT_SIGMA,
            lambda: Self::DEFAULT_LAMBDA,
            max_fe: 10_000 * dim as u64,
            seed,
            curve_stride: 100 * dim as u64,
        }
    }

    /// Number of budget intervals, `i_max - i_min + 1`.
    pub fn interval_count(&self) -> u64 {
        u64::from(self.i_max - self.i_min) + 1
    }

    /// Evaluation count that ends interval `j` (zero-based).
    pub fn interval_end(&self, j: u32) -> u64 {
        (u128::from(self.max_fe) * (u128::from(j) + 1) / u128::from(self.interval_count())) as u64
    }

    pub fn validate(&self, dim: usize) -> Result<(), YiError> {
        let bad = |msg: String| Err(YiError::InvalidConfig(msg));
        if self.i_min == 0 {
            return bad("i_min must be at least 1".into());
        }
        if self.i_min > self.i_max {
            return bad(format!(
                "i_min ({}) exceeds i_max ({})",
                self.i_min, self.i_max
            ));
        }
        if !self.sigma.is_finite() || self.sigma <= 1.0 {
            return bad(format!(
                "sigma must be a finite value above 1, got {}",
                self.sigma
            ));
        }
        StableParams::standard(self.lambda)?;
        if self.curve_stride == 0 {
            return bad("curve_stride must be positive".into());
        }
        if self.max_fe == 0 {
            return Err(ObjectiveError::BudgetExhausted { budget: 0 }.into());
        }
        let floor = 2 * dim as u64 + 1;
        if self.max_fe < floor {
            return bad(format!(
                "max_fe ({}) must be at least 2D + 1 = {floor}",
                self.max_fe
            ));
        }
        Ok(())
    }
}

/// Split winners recorded during one archive duration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Archive {
    records: Vec<Scored>,
}

impl Archive {
    pub fn push(&mut self, entry: Scored) {
        self.records.push(entry);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[Scored] {
        &self.records
    }

    /// Lowest-fitness entry; the earliest one wins ties.
    pub fn best(&self) -> Option<&Scored> {
        self.records
            .iter()
            .reduce(|best, e| if e.fitness < best.fitness { e } else { best })
    }

    fn clear(&mut self) {
        self.records.clear();
    }
}

/// What happened at an interval transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    /// The interval end that was crossed.
    pub threshold: u64,
    /// Evaluations used when the crossing was detected.
    pub evals_used: u64,
    /// Interval index after the transition.
    pub interval_index: u32,
    /// Archive duration after the transition.
    pub archive_duration: u32,
    /// Scope after the transition.
    pub alpha: f64,
}

/// Full mutable optimizer state for one run.
#[derive(Debug, Clone)]
pub struct YiState<'a> {
    config: YiConfig,
    tracker: TrackedObjective<'a>,
    rng: RandomSource,
    stable: StableParams,
    incumbent: Scored,
    alpha: f64,
    interval_index: u32,
    archive_duration: u32,
    splits_in_interval: u32,
    next_interval_time: u64,
    archive: Archive,
    transitions: Vec<Transition>,
    last_split: Option<Scored>,
}

impl<'a> YiState<'a> {
    /// Draw and evaluate the initial Yi-point.
    pub fn init(config: YiConfig, spec: &'a ObjectiveSpec) -> Result<Self, YiError> {
        let dim = spec.dim();
        config.validate(dim)?;
        let stable = StableParams::standard(config.lambda)?;
        let mut rng = RandomSource::new(config.seed);
        let mut tracker = TrackedObjective::new(spec, config.max_fe, config.curve_stride);
        let point = spec.space().sample(&mut rng);
        let fitness = tracker.evaluate(&point)?;
        Ok(Self {
            next_interval_time: config.interval_end(0),
            archive_duration: config.i_max,
            alpha: dim as f64,
            config,
            tracker,
            rng,
            stable,
            incumbent: Scored { point, fitness },
            interval_index: 0,
            splits_in_interval: 0,
            archive: Archive::default(),
            transitions: Vec::new(),
            last_split: None,
        })
    }

    pub fn config(&self) -> &YiConfig {
        &self.config
    }

    pub fn incumbent(&self) -> &Scored {
        &self.incumbent
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn interval_index(&self) -> u32 {
        self.interval_index
    }

    pub fn archive_duration(&self) -> u32 {
        self.archive_duration
    }

    pub fn splits_in_interval(&self) -> u32 {
        self.splits_in_interval
    }

    pub fn next_interval_time(&self) -> u64 {
        self.next_interval_time
    }

    pub fn archive(&self) -> &Archive {
        &self.archive
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Winner of the most recent split made by [`YiState::step`].
    pub fn last_split(&self) -> Option<&Scored> {
        self.last_split.as_ref()
    }

    pub fn evals_used(&self) -> u64 {
        self.tracker.used()
    }

    pub fn is_exhausted(&self) -> bool {
        self.tracker.is_exhausted()
    }

    /// Best point over every evaluation of the run.
    pub fn global_best(&self) -> &Scored {
        self.tracker.best().expect("initial point evaluated")
    }

    /// Generate up to `2D` candidates around the incumbent and return the
    /// best. When fewer than `2D` evaluations remain only that many
    /// candidates are generated.
    pub fn levy_split(&mut self) -> Result<Scored, YiError> {
        let remaining = self.tracker.remaining();
        if remaining == 0 {
            return Err(ObjectiveError::BudgetExhausted {
                budget: self.config.max_fe,
            }
            .into());
        }
        let dim = self.tracker.spec().dim();
        let count = remaining.min(2 * dim as u64);
        let space = self.tracker.space();
        let mut best: Option<Scored> = None;
        for _ in 0..count {
            let step = self.rng.sample_stable_vector(self.stable, dim)?;
            let mut candidate: Vec<f64> = self
                .incumbent
                .point
                .iter()
                .zip(&step)
                .map(|(p, s)| p + self.alpha * s)
                .collect();
            repair(&mut candidate, space, &mut self.rng);
            let fitness = self.tracker.evaluate(&candidate)?;
            if best.as_ref().is_none_or(|b| fitness < b.fitness) {
                best = Some(Scored {
                    point: candidate,
                    fitness,
                });
            }
        }
        Ok(best.expect("at least one candidate"))
    }

    /// Enter the next interval: shrink the scope and the archive duration.
    /// Returns `false` without changing anything once `I` has reached `i_min`.
    pub fn interval_transition(&mut self) -> bool {
        if self.interval_index >= self.config.i_max - self.config.i_min {
            return false;
        }
        let threshold = self.next_interval_time;
        self.alpha /= self.config.sigma;
        self.interval_index += 1;
        self.archive_duration = self.config.i_max - self.interval_index;
        self.next_interval_time = self.config.interval_end(self.interval_index);
        self.transitions.push(Transition {
            threshold,
            evals_used: self.tracker.used(),
            interval_index: self.interval_index,
            archive_duration: self.archive_duration,
            alpha: self.alpha,
        });
        true
    }

    /// Adopt the best archived point and start a new archive duration.
    pub fn archive_flush(&mut self) -> Result<(), YiError> {
        let best = self.archive.best().ok_or(YiError::EmptyArchive)?.clone();
        self.incumbent = best;
        self.archive.clear();
        self.splits_in_interval = 0;
        Ok(())
    }

    /// One iteration of the main loop.
    pub fn step(&mut self) -> Result<(), YiError> {
        if self.tracker.is_exhausted() {
            return Err(ObjectiveError::BudgetExhausted {
                budget: self.config.max_fe,
            }
            .into());
        }
        if self.tracker.used() > self.next_interval_time
            && self.interval_transition()
            && self.archive.len() >= self.archive_duration as usize
        {
            // The duration shrank below what is already archived.
            self.archive_flush()?;
        }
        let winner = self.levy_split()?;
        self.archive.push(winner.clone());
        self.incumbent = winner.clone();
        self.last_split = Some(winner);
        self.splits_in_interval += 1;
        if self.splits_in_interval >= self.archive_duration {
            self.archive_flush()?;
        }
        Ok(())
    }

    pub fn into_result(self) -> RunResult {
        self.tracker.finish(self.config.seed)
    }
}

/// Run the Yi optimizer until the evaluation budget is spent.
pub fn yi_optimize(config: YiConfig, spec: &ObjectiveSpec) -> Result<RunResult, YiError> {
    let mut state = YiState::init(config, spec)?;
    while !state.is_exhausted() {
        state.step()?;
    }
    Ok(state.into_result())
}
