//! Run-error summaries and Welch's two-sample t-test on summary statistics.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::HarnessError;

/// Best, worst, mean and sample standard deviation over run errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub best: f64,
    pub worst: f64,
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl StatsSummary {
    /// A single run has no spread; its std is reported as 0.
    pub fn is_degenerate(&self) -> bool {
        self.n < 2
    }

    pub fn moments(&self) -> SampleMoments {
        SampleMoments {
            mean: self.mean,
            std: self.std,
            n: self.n,
        }
    }
}

pub fn summarize(errors: &[f64]) -> Result<StatsSummary, HarnessError> {
    if errors.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    let n = errors.len();
    let best = errors.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = errors.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // Constant samples (including n = 1) are exact: rounding in the sum
    // would otherwise leave a spurious spread.
    if best == worst {
        return Ok(StatsSummary {
            best,
            worst,
            mean: best,
            std: 0.0,
            n,
        });
    }
    let mean = (errors.iter().sum::<f64>() / n as f64).clamp(best, worst);
    let ss: f64 = errors.iter().map(|e| (e - mean).powi(2)).sum();
    let std = (ss / (n - 1) as f64).sqrt();
    Ok(StatsSummary {
        best,
        worst,
        mean,
        std,
        n,
    })
}

/// The part of a summary a t-test needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleMoments {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl From<&StatsSummary> for SampleMoments {
    fn from(s: &StatsSummary) -> Self {
        s.moments()
    }
}

/// Verdict of sample `a` against sample `b` (lower error is better).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Win,
    Tie,
    Loss,
}

impl Verdict {
    pub fn flipped(self) -> Self {
        match self {
            Verdict::Win => Verdict::Loss,
            Verdict::Tie => Verdict::Tie,
            Verdict::Loss => Verdict::Win,
        }
    }

    /// The `+` / `=` / `-` marks of a comparison table.
    pub fn mark(self) -> char {
        match self {
            Verdict::Win => '+',
            Verdict::Tie => '=',
            Verdict::Loss => '-',
        }
    }

    pub fn from_mark(c: char) -> Option<Self> {
        match c {
            '+' => Some(Verdict::Win),
            '=' => Some(Verdict::Tie),
            '-' => Some(Verdict::Loss),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonOutcome {
    pub verdict: Verdict,
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
    /// One-tailed p-value in the direction of the observed difference.
    pub p_value: f64,
}

/// Welch's unequal-variance t statistic and Welch-Satterthwaite degrees of
/// freedom for `mean(a) - mean(b)`.
pub fn welch_statistic(a: &SampleMoments, b: &SampleMoments) -> (f64, f64) {
    let va = a.std * a.std / a.n as f64;
    let vb = b.std * b.std / b.n as f64;
    let se2 = va + vb;
    let t = (a.mean - b.mean) / se2.sqrt();
    let df = se2 * se2 / (va * va / (a.n - 1) as f64 + vb * vb / (b.n - 1) as f64);
    (t, df)
}

/// One-tailed Welch test of "a has lower mean error than b".
///
/// The reported p-value is `P(T >= |t|)`, so swapping the samples flips the
/// verdict and keeps `p`. A verdict is a tie iff `p >= alpha`. When both
/// samples have zero spread the test is decided on the means alone: equal
/// means tie with `p = 1`, otherwise `p = 0`.
pub fn welch_t_test_summary(
    a: &SampleMoments,
    b: &SampleMoments,
    alpha: f64,
) -> Result<ComparisonOutcome, HarnessError> {
    if a.n < 2 || b.n < 2 {
        return Err(HarnessError::InsufficientSamples { a: a.n, b: b.n });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(HarnessError::Config(format!(
            "significance level must lie in (0, 1), got {alpha}"
        )));
    }
    if a.std == 0.0 && b.std == 0.0 {
        let df = (a.n + b.n - 2) as f64;
        let diff = a.mean - b.mean;
        return Ok(if diff == 0.0 {
            ComparisonOutcome {
                verdict: Verdict::Tie,
                t_statistic: 0.0,
                degrees_of_freedom: df,
                p_value: 1.0,
            }
        } else {
            ComparisonOutcome {
                verdict: if diff < 0.0 {
                    Verdict::Win
                } else {
                    Verdict::Loss
                },
                t_statistic: if diff < 0.0 {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                },
                degrees_of_freedom: df,
                p_value: 0.0,
            }
        });
    }
    let (t, df) = welch_statistic(a, b);
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| HarnessError::Config(e.to_string()))?;
    let p = dist.sf(t.abs());
    let verdict = if p >= alpha {
        Verdict::Tie
    } else if t < 0.0 {
        Verdict::Win
    } else {
        Verdict::Loss
    };
    Ok(ComparisonOutcome {
        verdict,
        t_statistic: t,
        degrees_of_freedom: df,
        p_value: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(mean: f64, std: f64, n: usize) -> SampleMoments {
        SampleMoments { mean, std, n }
    }

    #[test]
    fn summary_by_hand() {
        let s = summarize(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(
            (s.best, s.worst, s.mean, s.std, s.n),
            (1.0, 3.0, 2.0, 1.0, 3)
        );
        let one = summarize(&[5.0]).unwrap();
        assert_eq!(
            (one.best, one.worst, one.mean, one.std),
            (5.0, 5.0, 5.0, 0.0)
        );
        assert!(one.is_degenerate());
        let c = summarize(&[2.81e-6; 51]).unwrap();
        assert_eq!(c.mean, 2.81e-6);
        assert_eq!(c.std, 0.0);
        assert!(matches!(summarize(&[]), Err(HarnessError::EmptyInput)));
    }

    #[test]
    fn identical_samples_tie() {
        let a = m(3.0, 1.5, 51);
        let out = welch_t_test_summary(&a, &a, 0.05).unwrap();
        assert_eq!(out.verdict, Verdict::Tie);
        assert_eq!(out.t_statistic, 0.0);
    }

    #[test]
    fn clear_separation() {
        let out = welch_t_test_summary(&m(0.0, 1.0, 51), &m(10.0, 1.0, 51), 0.05).unwrap();
        let expected_t = -10.0 / (2.0f64 / 51.0).sqrt();
        assert!((out.t_statistic - expected_t).abs() < 1e-9);
        assert!((out.t_statistic + 50.5).abs() < 0.01);
        assert!((out.degrees_of_freedom - 100.0).abs() < 1e-9);
        assert!(out.p_value < 1e-10);
        assert_eq!(out.verdict, Verdict::Win);
    }

    #[test]
    fn swap_flips_verdict() {
        let a = m(1.0, 0.5, 20);
        let b = m(1.6, 0.9, 30);
        let ab = welch_t_test_summary(&a, &b, 0.05).unwrap();
        let ba = welch_t_test_summary(&b, &a, 0.05).unwrap();
        assert_eq!(ab.verdict, ba.verdict.flipped());
        assert_eq!(ab.p_value, ba.p_value);
        assert_eq!(ab.t_statistic, -ba.t_statistic);
    }

    #[test]
    fn zero_spread_cases() {
        let tie = welch_t_test_summary(&m(2.0, 0.0, 5), &m(2.0, 0.0, 5), 0.05).unwrap();
        assert_eq!(tie.verdict, Verdict::Tie);
        let win = welch_t_test_summary(&m(1.0, 0.0, 5), &m(2.0, 0.0, 5), 0.05).unwrap();
        assert_eq!((win.verdict, win.p_value), (Verdict::Win, 0.0));
        let loss = welch_t_test_summary(&m(3.0, 0.0, 5), &m(2.0, 0.0, 5), 0.05).unwrap();
        assert_eq!(loss.verdict, Verdict::Loss);
    }

    #[test]
    fn needs_two_samples() {
        assert!(welch_t_test_summary(&m(1.0, 0.0, 1), &m(1.0, 1.0, 5), 0.05).is_err());
    }

    #[test]
    fn marks_round_trip() {
        for v in [Verdict::Win, Verdict::Tie, Verdict::Loss] {
            assert_eq!(Verdict::from_mark(v.mark()), Some(v));
        }
        assert_eq!(Verdict::from_mark('x'), None);
    }
}
