//! Win/tie/loss tables over a common set of functions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::stats::{welch_t_test_summary, ComparisonOutcome, SampleMoments, Verdict};
use super::HarnessError;

/// Counts are from the opponent's side: a win means the opponent's mean
/// error is significantly lower than ours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WtlTable {
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
    pub per_function: BTreeMap<String, ComparisonOutcome>,
}

impl WtlTable {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.wins, self.ties, self.losses)
    }

    pub fn total(&self) -> usize {
        self.wins + self.ties + self.losses
    }
}

/// Compare `theirs` against `ours` function by function.
pub fn wtl_table(
    ours: &BTreeMap<String, SampleMoments>,
    theirs: &BTreeMap<String, SampleMoments>,
    alpha: f64,
) -> Result<WtlTable, HarnessError> {
    let missing_ours: Vec<String> = theirs
        .keys()
        .filter(|k| !ours.contains_key(*k))
        .cloned()
        .collect();
    let missing_theirs: Vec<String> = ours
        .keys()
        .filter(|k| !theirs.contains_key(*k))
        .cloned()
        .collect();
    if !missing_ours.is_empty() || !missing_theirs.is_empty() {
        return Err(HarnessError::KeyMismatch {
            missing_ours,
            missing_theirs,
        });
    }
    let mut table = WtlTable {
        wins: 0,
        ties: 0,
        losses: 0,
        per_function: BTreeMap::new(),
    };
    for (key, our) in ours {
        let outcome = welch_t_test_summary(&theirs[key], our, alpha)?;
        match outcome.verdict {
            Verdict::Win => table.wins += 1,
            Verdict::Tie => table.ties += 1,
            Verdict::Loss => table.losses += 1,
        }
        table.per_function.insert(key.clone(), outcome);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(entries: &[(&str, f64, f64)]) -> BTreeMap<String, SampleMoments> {
        entries
            .iter()
            .map(|&(k, mean, std)| (k.to_string(), SampleMoments { mean, std, n: 51 }))
            .collect()
    }

    #[test]
    fn self_comparison_is_all_ties() {
        let ours = table(&[("a", 1.0, 0.5), ("b", 3.0, 2.0), ("c", 0.0, 0.0)]);
        let t = wtl_table(&ours, &ours, 0.05).unwrap();
        assert_eq!(t.counts(), (0, 3, 0));
    }

    #[test]
    fn opponent_perspective() {
        let ours = table(&[("a", 1.0, 0.1), ("b", 5.0, 0.1)]);
        let theirs = table(&[("a", 5.0, 0.1), ("b", 1.0, 0.1)]);
        let t = wtl_table(&ours, &theirs, 0.05).unwrap();
        assert_eq!(t.per_function["a"].verdict, Verdict::Loss);
        assert_eq!(t.per_function["b"].verdict, Verdict::Win);
        assert_eq!(t.total(), 2);
    }

    #[test]
    fn key_mismatch_lists_both_sides() {
        let ours = table(&[("a", 1.0, 1.0), ("b", 1.0, 1.0)]);
        let theirs = table(&[("a", 1.0, 1.0), ("c", 1.0, 1.0)]);
        match wtl_table(&ours, &theirs, 0.05) {
            Err(HarnessError::KeyMismatch {
                missing_ours,
                missing_theirs,
            }) => {
                assert_eq!(missing_ours, vec!["c".to_string()]);
                assert_eq!(missing_theirs, vec!["b".to_string()]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
