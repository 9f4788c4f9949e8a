//! Simulated annealing with Metropolis acceptance and geometric cooling.
//!
//! Each temperature level runs `chain_length` Gaussian proposals with
//! per-coordinate standard deviation `(T / t_max) * width / 10`. The cooling
//! factor is fitted so the last level the budget can pay for sits at
//! `t_min`. The run also stops after `stay_limit` consecutive levels without
//! improving the best point.

use serde::{Deserialize, Serialize};

use crate::objectives::ObjectiveSpec;
use crate::rng::RandomSource;
use crate::run::{repair, RunResult, Scored, TrackedObjective};

use super::{check_budget, BaselineError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SAConfig {
    pub t_max: f64,
    pub t_min: f64,
    /// Proposals per temperature level.
    pub chain_length: u64,
    /// Consecutive non-improving levels tolerated before stopping.
    pub stay_limit: u64,
    pub max_fe: u64,
    pub seed: u64,
}

impl SAConfig {
    pub fn new(max_fe: u64, seed: u64) -> Self {
        Self {
            t_max: 100.0,
            t_min: 1e-7,
            chain_length: 300,
            stay_limit: 150,
            max_fe,
            seed,
        }
    }

    fn validate(&self) -> Result<(), BaselineError> {
        check_budget(self.max_fe)?;
        if !(self.t_min > 0.0 && self.t_min < self.t_max) || !self.t_max.is_finite() {
            return Err(BaselineError::InvalidConfig(format!(
                "need 0 < t_min < t_max, got t_min = {}, t_max = {}",
                self.t_min, self.t_max
            )));
        }
        if self.chain_length == 0 || self.stay_limit == 0 {
            return Err(BaselineError::InvalidConfig(
                "chain_length and stay_limit must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Number of levels and the per-level cooling factor.
    fn schedule(&self) -> (u64, f64) {
        let levels = (self.max_fe - 1).div_ceil(self.chain_length).max(1);
        let gamma = if levels > 1 {
            (self.t_min / self.t_max).powf(1.0 / (levels - 1) as f64)
        } else {
            1.0
        };
        (levels, gamma)
    }
}

/// Metropolis acceptance probability of a move changing the energy by
/// `delta` at temperature `t`.
pub fn metropolis_acceptance(delta: f64, t: f64) -> f64 {
    if delta <= 0.0 {
        1.0
    } else if t <= 0.0 {
        0.0
    } else {
        (-delta / t).exp()
    }
}

pub fn sa_optimize(cfg: SAConfig, spec: &ObjectiveSpec) -> Result<RunResult, BaselineError> {
    cfg.validate()?;
    let space = spec.space();
    let dim = spec.dim();
    let mut rng = RandomSource::new(cfg.seed);
    let mut tracker = TrackedObjective::new(spec, cfg.max_fe, 100 * dim as u64);

    let point = space.sample(&mut rng);
    let fitness = tracker.evaluate(&point)?;
    let mut current = Scored { point, fitness };

    let (levels, gamma) = cfg.schedule();
    let mut temperature = cfg.t_max;
    let mut stagnant = 0;
    for _ in 0..levels {
        if tracker.is_exhausted() {
            break;
        }
        let best_before = tracker.best().expect("evaluated").fitness;
        let frac = temperature / cfg.t_max;
        for _ in 0..cfg.chain_length {
            if tracker.is_exhausted() {
                break;
            }
            let mut proposal: Vec<f64> = current
                .point
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    rng.gaussian(*x, frac * space.width(i) / 10.0)
                        .expect("non-negative std")
                })
                .collect();
            repair(&mut proposal, space, &mut rng);
            let f = tracker.evaluate(&proposal)?;
            let p = metropolis_acceptance(f - current.fitness, temperature);
            if p >= 1.0 || rng.unit() < p {
                current = Scored {
                    point: proposal,
                    fitness: f,
                };
            }
        }
        if tracker.best().expect("evaluated").fitness < best_before {
            stagnant = 0;
        } else {
            stagnant += 1;
            if stagnant >= cfg.stay_limit {
                break;
            }
        }
        temperature *= gamma;
    }
    Ok(tracker.finish(cfg.seed))
}
