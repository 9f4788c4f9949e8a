use crate::objectives::ObjectiveSpec;
use crate::rng::RandomSource;
use crate::run::{RunResult, TrackedObjective};

use super::{check_budget, BaselineError};

/// Best of `max_fe` independent uniform points.
pub fn random_search(
    max_fe: u64,
    seed: u64,
    spec: &ObjectiveSpec,
) -> Result<RunResult, BaselineError> {
    check_budget(max_fe)?;
    let mut rng = RandomSource::new(seed);
    let stride = 100 * spec.dim() as u64;
    let mut tracker = TrackedObjective::new(spec, max_fe, stride);
    while !tracker.is_exhausted() {
        let x = spec.space().sample(&mut rng);
        tracker.evaluate(&x)?;
    }
    Ok(tracker.finish(seed))
}
