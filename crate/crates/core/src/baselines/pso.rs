//! Global-best particle swarm optimization.

use serde::{Deserialize, Serialize};

use crate::objectives::ObjectiveSpec;
use crate::rng::RandomSource;
use crate::run::{repair, RunResult, Scored, TrackedObjective};

use super::{check_budget, BaselineError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PSOConfig {
    pub pop_size: usize,
    /// Inertia weight.
    pub w: f64,
    /// Cognitive coefficient (pull towards the particle's own best).
    pub c1: f64,
    /// Social coefficient (pull towards the swarm best).
    pub c2: f64,
    pub max_fe: u64,
    pub seed: u64,
}

impl PSOConfig {
    pub fn new(max_fe: u64, seed: u64) -> Self {
        Self {
            pop_size: 50,
            w: 0.8,
            c1: 0.5,
            c2: 0.5,
            max_fe,
            seed,
        }
    }

    fn validate(&self) -> Result<(), BaselineError> {
        check_budget(self.max_fe)?;
        if self.pop_size < 2 {
            return Err(BaselineError::InvalidConfig(format!(
                "pop_size must be at least 2, got {}",
                self.pop_size
            )));
        }
        if [self.w, self.c1, self.c2]
            .iter()
            .any(|c| !c.is_finite() || *c < 0.0)
        {
            return Err(BaselineError::InvalidConfig(
                "w, c1 and c2 must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Particle {
    position: Vec<f64>,
    velocity: Vec<f64>,
    fitness: f64,
    personal_best: Scored,
}

pub fn pso_optimize(cfg: PSOConfig, spec: &ObjectiveSpec) -> Result<RunResult, BaselineError> {
    cfg.validate()?;
    let space = spec.space();
    let dim = spec.dim();
    let mut rng = RandomSource::new(cfg.seed);
    let mut tracker = TrackedObjective::new(spec, cfg.max_fe, 100 * dim as u64);
    // Velocities are clamped to half the box width per coordinate.
    let vmax: Vec<f64> = (0..dim).map(|i| 0.5 * space.width(i)).collect();

    let mut swarm: Vec<Particle> = Vec::with_capacity(cfg.pop_size);
    while swarm.len() < cfg.pop_size && !tracker.is_exhausted() {
        let position = space.sample(&mut rng);
        let velocity: Vec<f64> = vmax
            .iter()
            .map(|v| rng.uniform(-v, *v).expect("positive width"))
            .collect();
        let fitness = tracker.evaluate(&position)?;
        swarm.push(Particle {
            personal_best: Scored {
                point: position.clone(),
                fitness,
            },
            position,
            velocity,
            fitness,
        });
    }
    let mut global = best_of(&swarm);

    while !tracker.is_exhausted() {
        for p in swarm.iter_mut() {
            if tracker.is_exhausted() {
                break;
            }
            #[allow(clippy::needless_range_loop)]
            for j in 0..dim {
                let r1 = rng.unit();
                let r2 = rng.unit();
                let v = cfg.w * p.velocity[j]
                    + cfg.c1 * r1 * (p.personal_best.point[j] - p.position[j])
                    + cfg.c2 * r2 * (global.point[j] - p.position[j]);
                p.velocity[j] = v.clamp(-vmax[j], vmax[j]);
                p.position[j] += p.velocity[j];
            }
            repair(&mut p.position, space, &mut rng);
            p.fitness = tracker.evaluate(&p.position)?;
            if p.fitness < p.personal_best.fitness {
                p.personal_best = Scored {
                    point: p.position.clone(),
                    fitness: p.fitness,
                };
            }
        }
        let sweep_best = best_of(&swarm);
        if sweep_best.fitness < global.fitness {
            global = sweep_best;
        }
    }
    Ok(tracker.finish(cfg.seed))
}

fn best_of(swarm: &[Particle]) -> Scored {
    swarm
        .iter()
        .map(|p| &p.personal_best)
        .reduce(|a, b| if b.fitness < a.fitness { b } else { a })
        .expect("non-empty swarm")
        .clone()
}
