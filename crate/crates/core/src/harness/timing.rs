//! Algorithm-overhead measurement normalized by a reference arithmetic loop.
//!
//! `t0` times a fixed loop of basic floating-point operations, `t1` times
//! bare evaluations of the timing objective and `t2` times complete YI runs
//! using the same number of evaluations. `(t2 - t1) / t0` is then the cost of
//! the optimizer itself in units of the reference loop.

use std::hint::black_box;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::objectives::{BaseFunction, EvaluationCounter, ObjectiveDescriptor, DEFAULT_MARGIN};
use crate::rng::RandomSource;
use crate::yi::yi_optimize;

use super::config::YiParams;
use super::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub dim: usize,
    pub t0: f64,
    pub t1: f64,
    pub t2: f64,
    pub complexity: f64,
    /// Set when `t0` is too short for the clock to resolve reliably.
    pub timer_warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingOptions {
    pub reference_iterations: u64,
    pub objective_evals: u64,
    pub trials: u32,
    pub objective: BaseFunction,
    pub transform_seed: u64,
    pub seed: u64,
}

impl Default for TimingOptions {
    fn default() -> Self {
        Self {
            reference_iterations: 1_000_000,
            objective_evals: 200_000,
            trials: 5,
            objective: BaseFunction::Levy,
            transform_seed: 18,
            seed: 42,
        }
    }
}

/// The reference loop: one addition, division, multiplication, square root,
/// logarithm and exponential per iteration.
pub fn reference_loop(iterations: u64) -> f64 {
    let mut acc = 0.0;
    for i in 0..iterations {
        let mut x = black_box(0.55 + i as f64);
        x = x + x;
        x /= 2.0;
        x *= x;
        x = x.sqrt();
        x = x.ln();
        x = x.exp();
        x /= x + 2.0;
        acc += x;
    }
    black_box(acc)
}

/// Smallest nonzero step observed between consecutive clock readings.
pub fn clock_resolution() -> Duration {
    let mut best = Duration::from_secs(1);
    for _ in 0..1000 {
        let a = Instant::now();
        let mut b = Instant::now();
        while b == a {
            b = Instant::now();
        }
        best = best.min(b - a);
    }
    best
}

fn timed<T>(f: impl FnOnce() -> T) -> (f64, T) {
    let start = Instant::now();
    let out = f();
    (start.elapsed().as_secs_f64(), out)
}

/// Measurement with the default protocol (1e6 reference iterations, 2e5
/// evaluations, 5 YI trials).
pub fn measure_time_complexity(
    dim: usize,
    params: &YiParams,
) -> Result<TimingReport, HarnessError> {
    measure_with(dim, params, &TimingOptions::default())
}

/// Measurement with an explicit protocol. Runs on the calling thread only.
pub fn measure_with(
    dim: usize,
    params: &YiParams,
    opts: &TimingOptions,
) -> Result<TimingReport, HarnessError> {
    if opts.reference_iterations == 0 || opts.objective_evals == 0 || opts.trials == 0 {
        return Err(HarnessError::Config(
            "timing protocol counts must be positive".into(),
        ));
    }
    let spec = ObjectiveDescriptor {
        base_id: opts.objective,
        dim,
        transform_seed: opts.transform_seed,
        margin: DEFAULT_MARGIN,
    }
    .build()?;
    let yi_cfg = |trial: u32| {
        params.config(
            dim,
            opts.objective_evals,
            opts.seed.wrapping_add(u64::from(trial)),
        )
    };
    yi_cfg(0).validate(dim)?;

    let (t0, _) = timed(|| reference_loop(opts.reference_iterations));

    let mut src = RandomSource::new(opts.seed);
    let points: Vec<Vec<f64>> = (0..256).map(|_| spec.space().sample(&mut src)).collect();
    let mut counter = EvaluationCounter::new(opts.objective_evals);
    let (t1, sum) = timed(|| -> Result<f64, HarnessError> {
        let mut sum = 0.0;
        for i in 0..opts.objective_evals as usize {
            sum += spec.eval(black_box(&points[i % points.len()]), &mut counter)?;
        }
        Ok(sum)
    });
    black_box(sum?);

    let mut total = 0.0;
    for trial in 0..opts.trials {
        let (t, run) = timed(|| yi_optimize(yi_cfg(trial), &spec));
        black_box(run?);
        total += t;
    }
    let t2 = total / f64::from(opts.trials);

    let res = clock_resolution().as_secs_f64();
    let timer_warning = (t0 < 1000.0 * res)
        .then(|| format!("reference loop took {t0:.3e} s, below 1000 clock ticks of {res:.3e} s"));
    Ok(TimingReport {
        dim,
        t0,
        t1,
        t2,
        complexity: (t2 - t1) / t0,
        timer_warning,
    })
}
