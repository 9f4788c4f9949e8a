//! Error-valued benchmark objectives.
//!
//! An [`ObjectiveSpec`] composes a base function with a seeded shift `o` and
//! rotation `R`, evaluating `f(R (x - o) + c)` where `c` is the base
//! function's canonical optimum. The global minimum is therefore at `x = o`
//! with error 0 for every base function and every transform seed.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::RandomSource;

/// Default box half-width, shared by every function.
pub const DEFAULT_BOUND: f64 = 100.0;
/// Default shift margin, placing optima in the central 80% of the box.
pub const DEFAULT_MARGIN: f64 = 0.2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObjectiveError {
    #[error("evaluation budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("{function} needs at least {min} dimensions, got {got}")]
    DimensionTooSmall {
        function: BaseFunction,
        min: usize,
        got: usize,
    },
    #[error("unknown function id `{0}`")]
    UnknownFunction(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {index} = {value} lies outside [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("invalid search space: {0}")]
    InvalidSpace(String),
}

/// The base function catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseFunction {
    Sphere,
    BentCigar,
    Zakharov,
    Rosenbrock,
    Rastrigin,
    Levy,
    SchafferF7,
    Ackley,
    Griewank,
    #[serde(rename = "schwefel_1_2")]
    Schwefel12,
}

impl BaseFunction {
    pub const ALL: [BaseFunction; 10] = [
        BaseFunction::Sphere,
        BaseFunction::BentCigar,
        BaseFunction::Zakharov,
        BaseFunction::Rosenbrock,
        BaseFunction::Rastrigin,
        BaseFunction::Levy,
        BaseFunction::SchafferF7,
        BaseFunction::Ackley,
        BaseFunction::Griewank,
        BaseFunction::Schwefel12,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            BaseFunction::Sphere => "sphere",
            BaseFunction::BentCigar => "bent_cigar",
            BaseFunction::Zakharov => "zakharov",
            BaseFunction::Rosenbrock => "rosenbrock",
            BaseFunction::Rastrigin => "rastrigin",
            BaseFunction::Levy => "levy",
            BaseFunction::SchafferF7 => "schaffer_f7",
            BaseFunction::Ackley => "ackley",
            BaseFunction::Griewank => "griewank",
            BaseFunction::Schwefel12 => "schwefel_1_2",
        }
    }

    pub fn min_dim(&self) -> usize {
        match self {
            BaseFunction::Rosenbrock | BaseFunction::SchafferF7 => 2,
            _ => 1,
        }
    }

    /// Coordinate value of the canonical optimum (the same in every coordinate).
    pub fn canonical_optimum(&self) -> f64 {
        match self {
            BaseFunction::Rosenbrock | BaseFunction::Levy => 1.0,
            _ => 0.0,
        }
    }

    pub fn eval(&self, z: &[f64]) -> Result<f64, ObjectiveError> {
        if z.len() < self.min_dim() {
            return Err(ObjectiveError::DimensionTooSmall {
                function: *self,
                min: self.min_dim(),
                got: z.len(),
            });
        }
        Ok(self.eval_unchecked(z))
    }

    fn eval_unchecked(&self, z: &[f64]) -> f64 {
        use std::f64::consts::{E, PI};
        let d = z.len() as f64;
        match self {
            BaseFunction::Sphere => z.iter().map(|v| v * v).sum(),
            BaseFunction::BentCigar => {
                z[0] * z[0] + 1e6 * z[1..].iter().map(|v| v * v).sum::<f64>()
            }
            BaseFunction::Zakharov => {
                let sq: f64 = z.iter().map(|v| v * v).sum();
                let lin: f64 = z
                    .iter()
                    .enumerate()
                    .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
                    .sum();
                sq + lin.powi(2) + lin.powi(4)
            }
            BaseFunction::Rosenbrock => z
                .windows(2)
                .map(|w| 100.0 * (w[0] * w[0] - w[1]).powi(2) + (w[0] - 1.0).powi(2))
                .sum(),
            BaseFunction::Rastrigin => z
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            BaseFunction::Levy => {
                let w: Vec<f64> = z.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
                let last = w[w.len() - 1];
                let head = (PI * w[0]).sin().powi(2);
                let body: f64 = w[..w.len() - 1]
                    .iter()
                    .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
                    .sum();
                let tail = (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
                head + body + tail
            }
            BaseFunction::SchafferF7 => {
                let sum: f64 = z
                    .windows(2)
                    .map(|w| {
                        let s = (w[0] * w[0] + w[1] * w[1]).sqrt();
                        let rs = s.sqrt();
                        rs + rs * (50.0 * s.powf(0.2)).sin().powi(2)
                    })
                    .sum();
                (sum / (d - 1.0)).powi(2)
            }
            BaseFunction::Ackley => {
                let sq: f64 = z.iter().map(|v| v * v).sum::<f64>() / d;
                let cs: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
                // Clamp the rounding residue at the optimum.
                (-20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E).max(0.0)
            }
            BaseFunction::Griewank => {
                let sq: f64 = z.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = z
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sq - prod + 1.0
            }
            BaseFunction::Schwefel12 => {
                let mut prefix = 0.0;
                z.iter()
                    .map(|v| {
                        prefix += v;
                        prefix * prefix
                    })
                    .sum()
            }
        }
    }
}

impl fmt::Display for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for BaseFunction {
    type Err = ObjectiveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BaseFunction::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| ObjectiveError::UnknownFunction(s.to_string()))
    }
}

/// Evaluate a base function by string id.
pub fn eval_base(base_id: &str, z: &[f64]) -> Result<f64, ObjectiveError> {
    base_id.parse::<BaseFunction>()?.eval(z)
}

/// Box-constrained search domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, ObjectiveError> {
        if lower.is_empty() {
            return Err(ObjectiveError::InvalidSpace(
                "dimension must be at least 1".into(),
            ));
        }
        if lower.len() != upper.len() {
            return Err(ObjectiveError::InvalidSpace(format!(
                "{} lower bounds but {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(i) = (0..lower.len())
            .find(|&i| lower[i].is_nan() || lower[i] >= upper[i] || !upper[i].is_finite())
        {
            return Err(ObjectiveError::InvalidSpace(format!(
                "bound {i}: lower {} must be below upper {}",
                lower[i], upper[i]
            )));
        }
        Ok(Self { lower, upper })
    }

    /// The same `[lo, hi]` interval in every coordinate.
    pub fn uniform_box(dim: usize, lo: f64, hi: f64) -> Result<Self, ObjectiveError> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    /// `[-100, 100]^dim`.
    pub fn standard(dim: usize) -> Result<Self, ObjectiveError> {
        Self::uniform_box(dim, -DEFAULT_BOUND, DEFAULT_BOUND)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    /// Uniform point in the box.
    pub fn sample(&self, src: &mut RandomSource) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                src.uniform(self.lower[i], self.upper[i])
                    .expect("bounds validated")
            })
            .collect()
    }
}

/// Evaluation budget bookkeeping for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvaluationCounter {
    used: u64,
    budget: u64,
}

impl EvaluationCounter {
    pub fn new(budget: u64) -> Self {
        Self { used: 0, budget }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.budget
    }

    /// Reserve one evaluation.
    pub fn consume(&mut self) -> Result<(), ObjectiveError> {
        if self.used >= self.budget {
            return Err(ObjectiveError::BudgetExhausted {
                budget: self.budget,
            });
        }
        self.used += 1;
        Ok(())
    }
}

/// Orthogonal `d x d` matrix from the QR factorization of a seeded Gaussian
/// matrix, returned row-major. Column signs are fixed so that `R` has a
/// positive diagonal, making the result Haar-distributed.
pub fn make_rotation(transform_seed: u64, d: usize) -> Vec<f64> {
    let mut src = RandomSource::new(transform_seed);
    let m = DMatrix::from_fn(d, d, |_, _| src.gaussian(0.0, 1.0).expect("unit std"));
    let qr = m.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            out.push(q[(i, j)]);
        }
    }
    out
}

/// Uniform shift within the central `(1 - margin)` fraction of each interval.
pub fn make_shift(transform_seed: u64, space: &SearchSpace, margin: f64) -> Vec<f64> {
    let mut src = RandomSource::new(transform_seed);
    (0..space.dim())
        .map(|i| {
            let center = 0.5 * (space.lower[i] + space.upper[i]);
            let half = 0.5 * space.width(i) * (1.0 - margin);
            src.uniform(center - half, center + half)
                .expect("non-empty interval")
        })
        .collect()
}

/// Serializable description of an objective: enough to rebuild it exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveDescriptor {
    pub base_id: BaseFunction,
    pub dim: usize,
    pub transform_seed: u64,
    pub margin: f64,
}

impl ObjectiveDescriptor {
    pub fn build(&self) -> Result<ObjectiveSpec, ObjectiveError> {
        ObjectiveSpec::seeded(
            self.base_id,
            SearchSpace::standard(self.dim)?,
            self.transform_seed,
            self.margin,
        )
    }

    /// Short human-readable label such as `zakharov/10D`.
    pub fn label(&self) -> String {
        format!("{}/{}D", self.base_id, self.dim)
    }
}

/// A shifted, rotated base function over a box.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    base: BaseFunction,
    space: SearchSpace,
    shift: Vec<f64>,
    rotation: Vec<f64>,
    transform_seed: u64,
    margin: f64,
}

impl ObjectiveSpec {
    /// Build with seeded transforms. The rotation and shift use two
    /// independent children of `transform_seed`.
    pub fn seeded(
        base: BaseFunction,
        space: SearchSpace,
        transform_seed: u64,
        margin: f64,
    ) -> Result<Self, ObjectiveError> {
        if !(0.0..1.0).contains(&margin) {
            return Err(ObjectiveError::InvalidSpace(format!(
                "margin must lie in [0, 1), got {margin}"
            )));
        }
        let d = space.dim();
        if d < base.min_dim() {
            return Err(ObjectiveError::DimensionTooSmall {
                function: base,
                min: base.min_dim(),
                got: d,
            });
        }
        let root = RandomSource::new(transform_seed);
        let rotation = make_rotation(root.child(0).seed(), d);
        let shift = make_shift(root.child(1).seed(), &space, margin);
        Ok(Self {
            base,
            space,
            shift,
            rotation,
            transform_seed,
            margin,
        })
    }

    /// Build with explicit transforms; `rotation` is row-major `d x d`.
    pub fn with_transform(
        base: BaseFunction,
        space: SearchSpace,
        shift: Vec<f64>,
        rotation: Vec<f64>,
    ) -> Result<Self, ObjectiveError> {
        let d = space.dim();
        if shift.len() != d {
            return Err(ObjectiveError::DimensionMismatch {
                expected: d,
                got: shift.len(),
            });
        }
        if rotation.len() != d * d {
            return Err(ObjectiveError::DimensionMismatch {
                expected: d * d,
                got: rotation.len(),
            });
        }
        if d < base.min_dim() {
            return Err(ObjectiveError::DimensionTooSmall {
                function: base,
                min: base.min_dim(),
                got: d,
            });
        }
        Ok(Self {
            base,
            space,
            shift,
            rotation,
            transform_seed: 0,
            margin: 0.0,
        })
    }

    /// Untransformed base function: zero shift, identity rotation.
    pub fn identity(base: BaseFunction, space: SearchSpace) -> Result<Self, ObjectiveError> {
        let d = space.dim();
        let mut rotation = vec![0.0; d * d];
        for i in 0..d {
            rotation[i * d + i] = 1.0;
        }
        Self::with_transform(base, space, vec![0.0; d], rotation)
    }

    pub fn base(&self) -> BaseFunction {
        self.base
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Location of the global optimum.
    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    /// Row-major rotation matrix.
    pub fn rotation(&self) -> &[f64] {
        &self.rotation
    }

    pub fn descriptor(&self) -> ObjectiveDescriptor {
        ObjectiveDescriptor {
            base_id: self.base,
            dim: self.dim(),
            transform_seed: self.transform_seed,
            margin: self.margin,
        }
    }

    /// Error value at `x`, without consuming budget or checking bounds.
    pub fn error_at(&self, x: &[f64]) -> Result<f64, ObjectiveError> {
        let d = self.dim();
        if x.len() != d {
            return Err(ObjectiveError::DimensionMismatch {
                expected: d,
                got: x.len(),
            });
        }
        let diff: Vec<f64> = x.iter().zip(&self.shift).map(|(a, b)| a - b).collect();
        let c = self.base.canonical_optimum();
        let z: Vec<f64> = self
            .rotation
            .chunks_exact(d)
            .map(|row| row.iter().zip(&diff).map(|(r, v)| r * v).sum::<f64>() + c)
            .collect();
        Ok(self.base.eval_unchecked(&z))
    }

    /// Budgeted, bounds-checked evaluation.
    pub fn eval(&self, x: &[f64], counter: &mut EvaluationCounter) -> Result<f64, ObjectiveError> {
        if counter.is_exhausted() {
            return Err(ObjectiveError::BudgetExhausted {
                budget: counter.budget(),
            });
        }
        if x.len() != self.dim() {
            return Err(ObjectiveError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if let Some(index) =
            (0..x.len()).find(|&i| !(x[i] >= self.space.lower[i] && x[i] <= self.space.upper[i]))
        {
            return Err(ObjectiveError::OutOfBounds {
                index,
                value: x[index],
                lower: self.space.lower[index],
                upper: self.space.upper[index],
            });
        }
        counter.consume()?;
        self.error_at(x)
    }
}
