//! Experiment configuration files.
//!
//! ```json
//! {
//!   "optimizer": { "kind": "yi", "sigma": 3.0 },
//!   "functions": [{ "base_id": "zakharov", "transform_seed": 1 }],
//!   "dims": [10],
//!   "runs": 51,
//!   "output_path": "zakharov.jsonl"
//! }
//! ```
//!
//! Unknown fields are rejected at every level.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baselines::{
    de_optimize, pso_optimize, random_search, sa_optimize, DEConfig, PSOConfig, SAConfig,
};
use crate::objectives::{BaseFunction, ObjectiveDescriptor, ObjectiveSpec, DEFAULT_MARGIN};
use crate::run::RunResult;
use crate::yi::{yi_optimize, YiConfig};

use super::HarnessError;

pub const DEFAULT_MASTER_SEED: u64 = 42;
pub const DEFAULT_RUNS: u32 = 51;
pub const DEFAULT_FE_MULTIPLIER: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YiParams {
    #[serde(default = "yi_defaults::i_min")]
    pub i_min: u32,
    #[serde(default = "yi_defaults::i_max")]
    pub i_max: u32,
    #[serde(default = "yi_defaults::sigma")]
    pub sigma: f64,
    #[serde(default = "yi_defaults::lambda")]
    pub lambda: f64,
    /// Defaults to `100 * dim`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_stride: Option<u64>,
}

mod yi_defaults {
    use crate::yi::YiConfig;

    pub fn i_min() -> u32 {
        YiConfig::DEFAULT_I_MIN
    }
    pub fn i_max() -> u32 {
        YiConfig::DEFAULT_I_MAX
    }
    pub fn sigma() -> f64 {
        YiConfig::DEFAULT_SIGMA
    }
    pub fn lambda() -> f64 {
        YiConfig::DEFAULT_LAMBDA
    }
}

impl Default for YiParams {
    fn default() -> Self {
        Self {
            i_min: YiConfig::DEFAULT_I_MIN,
            i_max: YiConfig::DEFAULT_I_MAX,
            sigma: YiConfig::DEFAULT_SIGMA,
            lambda: YiConfig::DEFAULT_LAMBDA,
            curve_stride: None,
        }
    }
}

impl YiParams {
    pub fn config(&self, dim: usize, max_fe: u64, seed: u64) -> YiConfig {
        YiConfig {
            i_min: self.i_min,
            i_max: self.i_max,
            sigma: self.sigma,
            lambda: self.lambda,
            max_fe,
            seed,
            curve_stride: self.curve_stride.unwrap_or(100 * dim as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DEParams {
    #[serde(default = "de_defaults::pop_size")]
    pub pop_size: usize,
    #[serde(default = "de_defaults::f_weight")]
    pub f_weight: f64,
    #[serde(default = "de_defaults::crossover_rate")]
    pub crossover_rate: f64,
}

mod de_defaults {
    pub fn pop_size() -> usize {
        50
    }
    pub fn f_weight() -> f64 {
        0.5
    }
    pub fn crossover_rate() -> f64 {
        0.3
    }
}

impl Default for DEParams {
    fn default() -> Self {
        Self {
            pop_size: de_defaults::pop_size(),
            f_weight: de_defaults::f_weight(),
            crossover_rate: de_defaults::crossover_rate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PSOParams {
    #[serde(default = "pso_defaults::pop_size")]
    pub pop_size: usize,
    #[serde(default = "pso_defaults::w")]
    pub w: f64,
    #[serde(default = "pso_defaults::c")]
    pub c1: f64,
    #[serde(default = "pso_defaults::c")]
    pub c2: f64,
}

mod pso_defaults {
    pub fn pop_size() -> usize {
        50
    }
    pub fn w() -> f64 {
        0.8
    }
    pub fn c() -> f64 {
        0.5
    }
}

impl Default for PSOParams {
    fn default() -> Self {
        Self {
            pop_size: pso_defaults::pop_size(),
            w: pso_defaults::w(),
            c1: pso_defaults::c(),
            c2: pso_defaults::c(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SAParams {
    #[serde(default = "sa_defaults::t_max")]
    pub t_max: f64,
    #[serde(default = "sa_defaults::t_min")]
    pub t_min: f64,
    #[serde(default = "sa_defaults::chain_length")]
    pub chain_length: u64,
    #[serde(default = "sa_defaults::stay_limit")]
    pub stay_limit: u64,
}

mod sa_defaults {
    pub fn t_max() -> f64 {
        100.0
    }
    pub fn t_min() -> f64 {
        1e-7
    }
    pub fn chain_length() -> u64 {
        300
    }
    pub fn stay_limit() -> u64 {
        150
    }
}

impl Default for SAParams {
    fn default() -> Self {
        Self {
            t_max: sa_defaults::t_max(),
            t_min: sa_defaults::t_min(),
            chain_length: sa_defaults::chain_length(),
            stay_limit: sa_defaults::stay_limit(),
        }
    }
}

/// Optimizer selection, discriminated by `kind`. Budgets and seeds come from
/// the experiment, not from here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OptimizerSpec {
    Yi(YiParams),
    De(DEParams),
    Pso(PSOParams),
    Sa(SAParams),
    Random {},
}

impl Default for OptimizerSpec {
    fn default() -> Self {
        OptimizerSpec::Yi(YiParams::default())
    }
}

impl OptimizerSpec {
    pub fn name(&self) -> &'static str {
        match self {
            OptimizerSpec::Yi(_) => "yi",
            OptimizerSpec::De(_) => "de",
            OptimizerSpec::Pso(_) => "pso",
            OptimizerSpec::Sa(_) => "sa",
            OptimizerSpec::Random {} => "random",
        }
    }

    pub fn run(
        &self,
        spec: &ObjectiveSpec,
        max_fe: u64,
        seed: u64,
    ) -> Result<RunResult, HarnessError> {
        Ok(match self {
            OptimizerSpec::Yi(p) => yi_optimize(p.config(spec.dim(), max_fe, seed), spec)?,
            OptimizerSpec::De(p) => de_optimize(
                DEConfig {
                    pop_size: p.pop_size,
                    f_weight: p.f_weight,
                    crossover_rate: p.crossover_rate,
                    max_fe,
                    seed,
                },
                spec,
            )?,
            OptimizerSpec::Pso(p) => pso_optimize(
                PSOConfig {
                    pop_size: p.pop_size,
                    w: p.w,
                    c1: p.c1,
                    c2: p.c2,
                    max_fe,
                    seed,
                },
                spec,
            )?,
            OptimizerSpec::Sa(p) => sa_optimize(
                SAConfig {
                    t_max: p.t_max,
                    t_min: p.t_min,
                    chain_length: p.chain_length,
                    stay_limit: p.stay_limit,
                    max_fe,
                    seed,
                },
                spec,
            )?,
            OptimizerSpec::Random {} => random_search(max_fe, seed, spec)?,
        })
    }
}

/// One benchmark function of an experiment; the dimension comes from `dims`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionEntry {
    pub base_id: BaseFunction,
    #[serde(default)]
    pub transform_seed: u64,
    #[serde(default = "default_margin")]
    pub margin: f64,
}

fn default_margin() -> f64 {
    DEFAULT_MARGIN
}

impl FunctionEntry {
    pub fn new(base_id: BaseFunction, transform_seed: u64) -> Self {
        Self {
            base_id,
            transform_seed,
            margin: DEFAULT_MARGIN,
        }
    }

    pub fn descriptor(&self, dim: usize) -> ObjectiveDescriptor {
        ObjectiveDescriptor {
            base_id: self.base_id,
            dim,
            transform_seed: self.transform_seed,
            margin: self.margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub optimizer: OptimizerSpec,
    pub functions: Vec<FunctionEntry>,
    pub dims: Vec<usize>,
    #[serde(default = "default_runs")]
    pub runs: u32,
    /// Budget per run is `fe_multiplier * dim` evaluations.
    #[serde(default = "default_fe_multiplier")]
    pub fe_multiplier: u64,
    #[serde(default = "default_master_seed")]
    pub master_seed: u64,
    /// Run records are appended here as JSON lines; existing records are
    /// reused so an interrupted experiment resumes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_runs() -> u32 {
    DEFAULT_RUNS
}

fn default_fe_multiplier() -> u64 {
    DEFAULT_FE_MULTIPLIER
}

fn default_master_seed() -> u64 {
    DEFAULT_MASTER_SEED
}

fn default_workers() -> usize {
    1
}

impl ExperimentConfig {
    /// In-memory experiment with default budget, seed and worker count.
    pub fn new(
        optimizer: OptimizerSpec,
        functions: Vec<FunctionEntry>,
        dims: Vec<usize>,
        runs: u32,
    ) -> Self {
        Self {
            optimizer,
            functions,
            dims,
            runs,
            fe_multiplier: DEFAULT_FE_MULTIPLIER,
            master_seed: DEFAULT_MASTER_SEED,
            output_path: None,
            workers: 1,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            HarnessError::Config(msg) => HarnessError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn max_fe(&self, dim: usize) -> u64 {
        self.fe_multiplier * dim as u64
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.runs == 0 {
            return bad("runs: must be at least 1".into());
        }
        if self.functions.is_empty() {
            return bad("functions: at least one function is required".into());
        }
        if self.dims.is_empty() {
            return bad("dims: at least one dimension is required".into());
        }
        if self.fe_multiplier == 0 {
            return bad("fe_multiplier: must be at least 1".into());
        }
        if self.workers == 0 {
            return bad("workers: must be at least 1".into());
        }
        for f in &self.functions {
            if !(0.0..1.0).contains(&f.margin) {
                return bad(format!(
                    "functions: margin of {} must lie in [0, 1), got {}",
                    f.base_id, f.margin
                ));
            }
            for &d in &self.dims {
                if d < f.base_id.min_dim() {
                    return bad(format!(
                        "dims: {} needs at least {} dimensions, got {d}",
                        f.base_id,
                        f.base_id.min_dim()
                    ));
                }
            }
        }
        if let OptimizerSpec::Yi(p) = &self.optimizer {
            for &d in &self.dims {
                p.config(d, self.max_fe(d), 0)
                    .validate(d)
                    .map_err(|e| HarnessError::Config(format!("optimizer: {e}")))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg =
            ExperimentConfig::from_json(r#"{"functions":[{"base_id":"sphere"}],"dims":[10]}"#)
                .unwrap();
        assert_eq!(cfg.runs, 51);
        assert_eq!(cfg.fe_multiplier, 10_000);
        assert_eq!(cfg.master_seed, 42);
        assert_eq!(cfg.optimizer, OptimizerSpec::Yi(YiParams::default()));
        assert_eq!(cfg.functions[0].margin, 0.2);
        assert_eq!(cfg.max_fe(10), 100_000);
    }

    #[test]
    fn optimizer_discriminator() {
        let cfg = ExperimentConfig::from_json(
            r#"{"optimizer":{"kind":"pso","w":0.5},"functions":[{"base_id":"rastrigin"}],"dims":[2]}"#,
        )
        .unwrap();
        match cfg.optimizer {
            OptimizerSpec::Pso(p) => {
                assert_eq!(p.w, 0.5);
                assert_eq!(p.c1, 0.5);
            }
            other => panic!("unexpected {other:?}"),
        }
        let random = ExperimentConfig::from_json(
            r#"{"optimizer":{"kind":"random"},"functions":[{"base_id":"sphere"}],"dims":[2]}"#,
        )
        .unwrap();
        assert_eq!(random.optimizer.name(), "random");
    }

    #[test]
    fn rejections() {
        let cases = [
            r#"{"functions":[{"base_id":"sphere"}],"dims":[10],"bogus":1}"#,
            r#"{"functions":[{"base_id":"sphere","extra":true}],"dims":[10]}"#,
            r#"{"optimizer":{"kind":"yi","sigmaa":3},"functions":[{"base_id":"sphere"}],"dims":[10]}"#,
            r#"{"optimizer":{"kind":"cmaes"},"functions":[{"base_id":"sphere"}],"dims":[10]}"#,
            r#"{"functions":[{"base_id":"not_a_function"}],"dims":[10]}"#,
            r#"{"functions":[{"base_id":"sphere"}],"dims":[10],"runs":0}"#,
            r#"{"functions":[{"base_id":"rosenbrock"}],"dims":[1]}"#,
            r#"{"functions":[],"dims":[10]}"#,
            r#"{"optimizer":{"kind":"yi","sigma":0.5},"functions":[{"base_id":"sphere"}],"dims":[10]}"#,
        ];
        for text in cases {
            let err = ExperimentConfig::from_json(text).unwrap_err();
            assert!(err.is_config_error(), "{text}: {err}");
        }
    }

    #[test]
    fn serializes_back() {
        let cfg = ExperimentConfig::new(
            OptimizerSpec::Sa(SAParams::default()),
            vec![FunctionEntry::new(BaseFunction::Levy, 3)],
            vec![5],
            3,
        );
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    }
}
