//! Published summary statistics shipped with the crate.
//!
//! `comparison_50d.csv` holds the 50D mean and std of six algorithms on 29
//! functions together with the published verdict mark of each baseline
//! against YI. `yi_published.csv` holds YI's best/worst/mean/std at 10, 30
//! and 50 dimensions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::stats::{SampleMoments, StatsSummary, Verdict};

/// Runs behind every published statistic.
pub const PUBLISHED_RUNS: usize = 51;

const COMPARISON_CSV: &str = include_str!("../../data/comparison_50d.csv");
const YI_CSV: &str = include_str!("../../data/yi_published.csv");

/// Name of the proposed algorithm in the comparison data.
pub const YI_NAME: &str = "YI";

/// Baselines of the comparison data, in table order.
pub const BASELINE_NAMES: [&str; 5] = ["CV1.0", "dYYPO", "DE", "PSO", "SA"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedBaseline {
    pub algorithm: String,
    pub function: String,
    pub mean: f64,
    pub std: f64,
    pub n: usize,
    /// Published verdict against YI; absent for YI itself.
    pub mark: Option<Verdict>,
}

impl PublishedBaseline {
    pub fn moments(&self) -> SampleMoments {
        SampleMoments {
            mean: self.mean,
            std: self.std,
            n: self.n,
        }
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::trim).collect())
}

fn number(field: &str) -> f64 {
    field
        .parse()
        .unwrap_or_else(|_| panic!("bad number {field:?} in shipped data"))
}

/// Every row of the 50D comparison data.
pub fn comparison_rows() -> Vec<PublishedBaseline> {
    data_lines(COMPARISON_CSV)
        .map(|f| PublishedBaseline {
            algorithm: f[0].to_string(),
            function: f[1].to_string(),
            mean: number(f[2]),
            std: number(f[3]),
            n: PUBLISHED_RUNS,
            mark: f
                .get(4)
                .and_then(|m| m.chars().next())
                .and_then(Verdict::from_mark),
        })
        .collect()
}

/// Function id to moments for one algorithm of the comparison data.
pub fn comparison_moments(algorithm: &str) -> BTreeMap<String, SampleMoments> {
    comparison_rows()
        .into_iter()
        .filter(|r| r.algorithm == algorithm)
        .map(|r| (r.function.clone(), r.moments()))
        .collect()
}

/// Function id to the published verdict of `algorithm` against YI.
pub fn published_marks(algorithm: &str) -> BTreeMap<String, Verdict> {
    comparison_rows()
        .into_iter()
        .filter(|r| r.algorithm == algorithm)
        .filter_map(|r| r.mark.map(|m| (r.function, m)))
        .collect()
}

/// Published YI summaries at `dim`, keyed by function id.
pub fn yi_published(dim: usize) -> BTreeMap<String, StatsSummary> {
    data_lines(YI_CSV)
        .filter(|f| f[0].parse::<usize>().ok() == Some(dim))
        .map(|f| {
            (
                f[1].to_string(),
                StatsSummary {
                    best: number(f[2]),
                    worst: number(f[3]),
                    mean: number(f[4]),
                    std: number(f[5]),
                    n: PUBLISHED_RUNS,
                },
            )
        })
        .collect()
}
