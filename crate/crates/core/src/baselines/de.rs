//! Classic DE/rand/1/bin.

use serde::{Deserialize, Serialize};

use crate::objectives::{ObjectiveError, ObjectiveSpec};
use crate::rng::RandomSource;
use crate::run::{repair, RunResult, Scored, TrackedObjective};

use super::{check_budget, BaselineError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DEConfig {
    pub pop_size: usize,
    /// Differential weight `F`.
    pub f_weight: f64,
    pub crossover_rate: f64,
    pub max_fe: u64,
    pub seed: u64,
}

impl DEConfig {
    pub fn new(max_fe: u64, seed: u64) -> Self {
        Self {
            pop_size: 50,
            f_weight: 0.5,
            crossover_rate: 0.3,
            max_fe,
            seed,
        }
    }

    fn validate(&self) -> Result<(), BaselineError> {
        check_budget(self.max_fe)?;
        if self.pop_size < 4 {
            return Err(BaselineError::InvalidConfig(format!(
                "pop_size must be at least 4, got {}",
                self.pop_size
            )));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(BaselineError::InvalidConfig(format!(
                "crossover_rate must lie in [0, 1], got {}",
                self.crossover_rate
            )));
        }
        if !self.f_weight.is_finite() {
            return Err(BaselineError::InvalidConfig(
                "f_weight must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// `a + F (b - c)` crossed with `target`; coordinate `forced` always comes
/// from the mutant.
pub(crate) fn trial_vector(
    target: &[f64],
    donors: [&[f64]; 3],
    f_weight: f64,
    crossover_rate: f64,
    forced: usize,
    rng: &mut RandomSource,
) -> Vec<f64> {
    let [a, b, c] = donors;
    (0..target.len())
        .map(|j| {
            let take_mutant = rng.unit() < crossover_rate || j == forced;
            if take_mutant {
                a[j] + f_weight * (b[j] - c[j])
            } else {
                target[j]
            }
        })
        .collect()
}

/// Three distinct indices, all different from `exclude`.
fn pick_three(n: usize, exclude: usize, rng: &mut RandomSource) -> [usize; 3] {
    let mut out = [usize::MAX; 3];
    for k in 0..3 {
        loop {
            let r = rng.index(n);
            if r != exclude && !out[..k].contains(&r) {
                out[k] = r;
                break;
            }
        }
    }
    out
}

struct Population<'a> {
    cfg: DEConfig,
    tracker: TrackedObjective<'a>,
    rng: RandomSource,
    members: Vec<Scored>,
}

impl<'a> Population<'a> {
    /// The flag is false when the budget cannot cover the initial population.
    fn init(cfg: DEConfig, spec: &'a ObjectiveSpec) -> Result<(Self, bool), ObjectiveError> {
        let mut rng = RandomSource::new(cfg.seed);
        let mut tracker = TrackedObjective::new(spec, cfg.max_fe, 100 * spec.dim() as u64);
        let mut members = Vec::with_capacity(cfg.pop_size);
        while members.len() < cfg.pop_size && !tracker.is_exhausted() {
            let point = spec.space().sample(&mut rng);
            let fitness = tracker.evaluate(&point)?;
            members.push(Scored { point, fitness });
        }
        let complete = members.len() == cfg.pop_size;
        Ok((
            Self {
                cfg,
                tracker,
                rng,
                members,
            },
            complete,
        ))
    }

    /// One synchronous generation; stops early if the budget runs out.
    fn generation(&mut self) -> Result<(), ObjectiveError> {
        let n = self.members.len();
        let dim = self.tracker.spec().dim();
        let space = self.tracker.space();
        let mut next = self.members.clone();
        for (i, slot) in next.iter_mut().enumerate() {
            if self.tracker.is_exhausted() {
                break;
            }
            let [a, b, c] = pick_three(n, i, &mut self.rng);
            let forced = self.rng.index(dim);
            let mut trial = trial_vector(
                &self.members[i].point,
                [
                    &self.members[a].point,
                    &self.members[b].point,
                    &self.members[c].point,
                ],
                self.cfg.f_weight,
                self.cfg.crossover_rate,
                forced,
                &mut self.rng,
            );
            repair(&mut trial, space, &mut self.rng);
            let fitness = self.tracker.evaluate(&trial)?;
            if fitness <= self.members[i].fitness {
                *slot = Scored {
                    point: trial,
                    fitness,
                };
            }
        }
        self.members = next;
        Ok(())
    }
}

pub fn de_optimize(cfg: DEConfig, spec: &ObjectiveSpec) -> Result<RunResult, BaselineError> {
    cfg.validate()?;
    let seed = cfg.seed;
    let (mut pop, complete) = Population::init(cfg, spec)?;
    if complete {
        while !pop.tracker.is_exhausted() {
            pop.generation()?;
        }
    }
    Ok(pop.tracker.finish(seed))
}
