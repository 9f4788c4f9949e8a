//! Parameter analysis: YI variants against a base configuration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::compare::wtl_table;
use super::config::{
    ExperimentConfig, FunctionEntry, OptimizerSpec, YiParams, DEFAULT_MASTER_SEED,
};
use super::experiment::{run_experiment, CellResult};
use super::stats::{ComparisonOutcome, SampleMoments};
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepVariant {
    pub i_min: u32,
    pub i_max: u32,
    pub sigma: f64,
}

impl SweepVariant {
    pub fn apply(&self, base: &YiParams) -> YiParams {
        YiParams {
            i_min: self.i_min,
            i_max: self.i_max,
            sigma: self.sigma,
            ..base.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub base: YiParams,
    pub variants: Vec<SweepVariant>,
    pub functions: Vec<FunctionEntry>,
    pub dim: usize,
    pub runs: u32,
    #[serde(default = "default_fe_multiplier")]
    pub fe_multiplier: u64,
    #[serde(default = "default_master_seed")]
    pub master_seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_fe_multiplier() -> u64 {
    super::config::DEFAULT_FE_MULTIPLIER
}

fn default_master_seed() -> u64 {
    DEFAULT_MASTER_SEED
}

fn default_alpha() -> f64 {
    0.05
}

fn default_workers() -> usize {
    1
}

/// Verdicts are from the variant's side: a win means the variant's mean
/// error is significantly lower than the base's.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub variant: SweepVariant,
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
    pub per_function: BTreeMap<String, ComparisonOutcome>,
}

fn experiment(cfg: &SweepConfig, params: YiParams) -> ExperimentConfig {
    ExperimentConfig {
        fe_multiplier: cfg.fe_multiplier,
        master_seed: cfg.master_seed,
        workers: cfg.workers,
        ..ExperimentConfig::new(
            OptimizerSpec::Yi(params),
            cfg.functions.clone(),
            vec![cfg.dim],
            cfg.runs,
        )
    }
}

fn moments(cells: &[CellResult]) -> Result<BTreeMap<String, SampleMoments>, HarnessError> {
    cells
        .iter()
        .map(|c| Ok((c.function.label(), c.summary()?.moments())))
        .collect()
}

/// Run the base and every variant with identical seeds and compare each
/// variant against the base function by function.
pub fn parameter_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, HarnessError> {
    if cfg.variants.is_empty() {
        return Err(HarnessError::Config(
            "variants: at least one variant is required".into(),
        ));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(HarnessError::Config(format!(
            "alpha: must lie in (0, 1), got {}",
            cfg.alpha
        )));
    }
    let base = moments(&run_experiment(&experiment(cfg, cfg.base.clone()))?)?;
    cfg.variants
        .iter()
        .map(|v| {
            let ours = moments(&run_experiment(&experiment(cfg, v.apply(&cfg.base)))?)?;
            let table = wtl_table(&base, &ours, cfg.alpha)?;
            Ok(SweepRow {
                variant: *v,
                wins: table.wins,
                ties: table.ties,
                losses: table.losses,
                per_function: table.per_function,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::BaseFunction;

    fn small(variants: Vec<SweepVariant>) -> SweepConfig {
        SweepConfig {
            base: YiParams::default(),
            variants,
            functions: vec![
                FunctionEntry::new(BaseFunction::Sphere, 3),
                FunctionEntry::new(BaseFunction::Rastrigin, 3),
            ],
            dim: 2,
            runs: 4,
            fe_multiplier: 500,
            master_seed: 42,
            alpha: 0.05,
            workers: 1,
        }
    }

    #[test]
    fn identical_variant_ties_everywhere() {
        let rows = parameter_sweep(&small(vec![SweepVariant {
            i_min: 6,
            i_max: 15,
            sigma: 3.0,
        }]))
        .unwrap();
        assert_eq!((rows[0].wins, rows[0].ties, rows[0].losses), (0, 2, 0));
    }

    #[test]
    fn rows_partition_functions() {
        let rows = parameter_sweep(&small(vec![
            SweepVariant {
                i_min: 4,
                i_max: 10,
                sigma: 2.0,
            },
            SweepVariant {
                i_min: 6,
                i_max: 15,
                sigma: 1.5,
            },
        ]))
        .unwrap();
        assert_eq!(rows.len(), 2);
        for r in rows {
            assert_eq!(r.wins + r.ties + r.losses, 2);
            assert_eq!(r.per_function.len(), 2);
        }
    }

    #[test]
    fn needs_a_variant() {
        assert!(parameter_sweep(&small(vec![]))
            .unwrap_err()
            .is_config_error());
    }
}
