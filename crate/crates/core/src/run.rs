//! Per-run bookkeeping shared by every optimizer.

use serde::{Deserialize, Serialize};

use crate::objectives::{EvaluationCounter, ObjectiveError, ObjectiveSpec, SearchSpace};
use crate::rng::RandomSource;

/// An evaluated point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scored {
    pub point: Vec<f64>,
    pub fitness: f64,
}

/// One sample of a convergence curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub evals: u64,
    pub best_error: f64,
}

/// Outcome of one optimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_error: f64,
    pub best_point: Vec<f64>,
    pub evals_used: u64,
    pub curve: Vec<CurvePoint>,
    pub seed: u64,
}

/// Replace every out-of-bound coordinate with a fresh uniform draw over that
/// coordinate's full range. In-bound coordinates are untouched and consume no
/// randomness; redraws happen in ascending coordinate order.
pub fn repair(x: &mut [f64], space: &SearchSpace, src: &mut RandomSource) {
    for (i, v) in x.iter_mut().enumerate() {
        let (lo, hi) = (space.lower()[i], space.upper()[i]);
        if !(*v >= lo && *v <= hi) {
            *v = src.uniform(lo, hi).expect("validated bounds");
        }
    }
}

/// An objective bundled with its evaluation counter, the best point seen so
/// far and a strided convergence curve.
///
/// The curve records the first evaluation, every evaluation whose count is a
/// multiple of the stride, and the final count when the run is finished.
#[derive(Debug, Clone)]
pub struct TrackedObjective<'a> {
    spec: &'a ObjectiveSpec,
    counter: EvaluationCounter,
    best: Option<Scored>,
    curve: Vec<CurvePoint>,
    stride: u64,
}

impl<'a> TrackedObjective<'a> {
    pub fn new(spec: &'a ObjectiveSpec, budget: u64, stride: u64) -> Self {
        Self {
            spec,
            counter: EvaluationCounter::new(budget),
            best: None,
            curve: Vec::new(),
            stride: stride.max(1),
        }
    }

    pub fn spec(&self) -> &'a ObjectiveSpec {
        self.spec
    }

    pub fn space(&self) -> &'a SearchSpace {
        self.spec.space()
    }

    pub fn counter(&self) -> &EvaluationCounter {
        &self.counter
    }

    pub fn used(&self) -> u64 {
        self.counter.used()
    }

    pub fn remaining(&self) -> u64 {
        self.counter.remaining()
    }

    pub fn is_exhausted(&self) -> bool {
        self.counter.is_exhausted()
    }

    /// Best point over every evaluation so far.
    pub fn best(&self) -> Option<&Scored> {
        self.best.as_ref()
    }

    pub fn curve(&self) -> &[CurvePoint] {
        &self.curve
    }

    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64, ObjectiveError> {
        let f = self.spec.eval(x, &mut self.counter)?;
        let improved = self.best.as_ref().is_none_or(|b| f < b.fitness);
        if improved {
            self.best = Some(Scored {
                point: x.to_vec(),
                fitness: f,
            });
        }
        let used = self.counter.used();
        if used == 1 || used.is_multiple_of(self.stride) {
            self.curve.push(CurvePoint {
                evals: used,
                best_error: self.best.as_ref().map_or(f, |b| b.fitness),
            });
        }
        Ok(f)
    }

    /// Close the run. Panics if nothing was evaluated.
    pub fn finish(mut self, seed: u64) -> RunResult {
        let best = self.best.take().expect("at least one evaluation per run");
        let used = self.counter.used();
        if self.curve.last().is_none_or(|c| c.evals != used) {
            self.curve.push(CurvePoint {
                evals: used,
                best_error: best.fitness,
            });
        }
        RunResult {
            best_error: best.fitness,
            best_point: best.point,
            evals_used: used,
            curve: self.curve,
            seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::BaseFunction;

    #[test]
    fn repair_leaves_inbound_alone() {
        let space = SearchSpace::standard(3).unwrap();
        let mut src = RandomSource::new(1);
        let mut x = vec![1.0, -99.0, 100.0];
        repair(&mut x, &space, &mut src);
        assert_eq!(x, vec![1.0, -99.0, 100.0]);
    }

    #[test]
    fn repair_redraws_only_violations() {
        let space = SearchSpace::standard(2).unwrap();
        let mut src = RandomSource::new(2);
        let mut x = vec![150.0, 0.0];
        repair(&mut x, &space, &mut src);
        assert!((-100.0..=100.0).contains(&x[0]));
        assert_ne!(x[0], 150.0);
        assert_eq!(x[1], 0.0);

        let mut y = vec![-1e9, 1e9];
        repair(&mut y, &space, &mut src);
        assert!(space.contains(&y));

        let mut z = vec![f64::NAN, 0.5];
        repair(&mut z, &space, &mut src);
        assert!(space.contains(&z));
    }

    #[test]
    fn tracker_curve_and_best() {
        let spec = ObjectiveSpec::identity(BaseFunction::Sphere, SearchSpace::standard(1).unwrap())
            .unwrap();
        let mut t = TrackedObjective::new(&spec, 10, 4);
        for v in [3.0, 1.0, 2.0, 5.0, 0.5, 4.0, 4.0] {
            t.evaluate(&[v]).unwrap();
        }
        assert_eq!(t.best().unwrap().fitness, 0.25);
        let r = t.finish(7);
        assert_eq!(r.evals_used, 7);
        let evals: Vec<u64> = r.curve.iter().map(|c| c.evals).collect();
        assert_eq!(evals, vec![1, 4, 7]);
        assert_eq!(r.curve[1].best_error, 1.0);
        assert_eq!(r.best_error, 0.25);
        assert_eq!(r.seed, 7);
    }
}
