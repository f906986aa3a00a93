//! Evaluation: F1 scoring, cross-validation, paired significance tests,
//! model comparison, parameter sweeps, and confidence heat maps.

mod compare;
mod cv;
mod heatmap;
mod sweep;
mod ttest;

pub use compare::{compare, rankings, Comparison, ComparisonCell, Direction, RANK_TIE_EPS};
pub use cv::{fold_seed, run_cv, ClassifierSpec, CvResult, ScaleMode};
pub use heatmap::{confidence_grid, ConfidenceGrid};
pub use sweep::{normalize_against, sweep, BaselinePoint, SweepGrid, SweepPoint};
pub use ttest::{paired_t_test, two_tailed_p, TTestResult, SIGNIFICANCE_ALPHA};

use crate::error::{Result, VscError};

/// Outcome counts of a binary classifier, with the positive class mapped
/// to `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
}

impl ConfusionCounts {
    /// Tallies actual vs predicted labels. Both slices must have equal
    /// length and contain only `-1` and `+1`.
    pub fn from_labels(actual: &[f64], predicted: &[f64]) -> Result<Self> {
        if actual.len() != predicted.len() {
            return Err(VscError::Shape(format!(
                "{} actual labels vs {} predictions",
                actual.len(),
                predicted.len()
            )));
        }
        let mut counts = Self::default();
        for (&a, &p) in actual.iter().zip(predicted) {
            if (a != 1.0 && a != -1.0) || (p != 1.0 && p != -1.0) {
                return Err(VscError::Parameter(
                    "labels must be exactly -1 or +1".into(),
                ));
            }
            match (a == 1.0, p == 1.0) {
                (true, true) => counts.true_pos += 1,
                (false, true) => counts.false_pos += 1,
                (true, false) => counts.false_neg += 1,
                (false, false) => counts.true_neg += 1,
            }
        }
        Ok(counts)
    }

    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }

    /// F1 score `2tp / (2tp + fp + fn)`; zero when the denominator is
    /// zero (no positives anywhere).
    pub fn f1(&self) -> f64 {
        let denom = 2 * self.true_pos + self.false_pos + self.false_neg;
        if denom == 0 {
            0.0
        } else {
            2.0 * self.true_pos as f64 / denom as f64
        }
    }

    pub fn accuracy(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            (self.true_pos + self.true_neg) as f64 / self.total() as f64
        }
    }
}

/// F1 score of predictions against actual labels.
pub fn f1_score(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    Ok(ConfusionCounts::from_labels(actual, predicted)?.f1())
}

/// Mean and sample standard deviation (n-1 denominator; 0 when n < 2).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_and_f1() {
        // 3 true positives, 1 false positive, 2 false negatives.
        let actual = [1.0, 1.0, 1.0, -1.0, 1.0, 1.0, -1.0];
        let predicted = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0];
        let c = ConfusionCounts::from_labels(&actual, &predicted).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                true_pos: 3,
                false_pos: 1,
                false_neg: 2,
                true_neg: 1
            }
        );
        assert!((c.f1() - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.accuracy() - 4.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn f1_conventions() {
        // Perfect prediction.
        assert_eq!(f1_score(&[1.0, -1.0], &[1.0, -1.0]).unwrap(), 1.0);
        // No positives anywhere: denominator is zero.
        assert_eq!(f1_score(&[-1.0, -1.0], &[-1.0, -1.0]).unwrap(), 0.0);
        // All positives missed.
        assert_eq!(f1_score(&[1.0, 1.0], &[-1.0, -1.0]).unwrap(), 0.0);
    }

    #[test]
    fn f1_rejects_bad_labels() {
        assert!(f1_score(&[1.0, 0.5], &[1.0, 1.0]).is_err());
        assert!(f1_score(&[1.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn mean_std_conventions() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert!((m - 2.5).abs() < 1e-15);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[7.0]), (7.0, 0.0));
        assert_eq!(mean_std(&[]), (0.0, 0.0));
    }
}
