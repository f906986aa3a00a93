//! Pairwise significance comparison and tie-aware ranking of
//! cross-validation results.

use crate::error::{Result, VscError};
use crate::eval::cv::CvResult;
use crate::eval::ttest::{paired_t_test, TTestResult};

/// Mean-F1 differences below this are ranked as ties.
pub const RANK_TIE_EPS: f64 = 0.001;

/// How a row classifier's mean F1 relates to a column classifier's.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Better,
    Worse,
    Even,
}

/// Paired test between one ordered pair of classifiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonCell {
    pub test: TTestResult,
    pub direction: Direction,
}

/// All pairwise tests between jointly evaluated classifiers, plus ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub classifier_ids: Vec<String>,
    pub mean_f1: Vec<f64>,
    pub std_f1: Vec<f64>,
    /// Competition ranks (ties share the best rank and skip the next).
    pub ranks: Vec<usize>,
    /// `cells[i][j]` tests classifier `i` against `j`; the diagonal is
    /// `None`.
    pub cells: Vec<Vec<Option<ComparisonCell>>>,
    pub dataset_id: String,
    pub dataset_source: String,
    pub n_folds: usize,
    pub seed: u64,
}

impl Comparison {
    /// The significance mark of classifier `i` measured against reference
    /// `r`: `"▼"` when significantly worse, `"△"` when significantly
    /// better, `""` otherwise.
    pub fn mark_against(&self, i: usize, r: usize) -> &'static str {
        if i == r {
            return "";
        }
        match self.cells[i][r] {
            Some(cell) if cell.test.significant => match cell.direction {
                Direction::Worse => "▼",
                Direction::Better => "△",
                Direction::Even => "",
            },
            _ => "",
        }
    }
}

/// Competition ranking of mean scores, descending, with ties chained:
/// adjacent sorted values closer than `tie_eps` share a rank, and the
/// next distinct value's rank skips the tied positions.
pub fn rankings(mean_f1: &[f64], tie_eps: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..mean_f1.len()).collect();
    order.sort_by(|&a, &b| mean_f1[b].total_cmp(&mean_f1[a]).then(a.cmp(&b)));
    let mut ranks = vec![0usize; mean_f1.len()];
    let mut group_rank = 1;
    for pos in 0..order.len() {
        if pos > 0 && (mean_f1[order[pos - 1]] - mean_f1[order[pos]]).abs() >= tie_eps {
            group_rank = pos + 1;
        }
        ranks[order[pos]] = group_rank;
    }
    ranks
}

/// Runs every pairwise paired t-test among `results` and ranks the means.
///
/// All results must come from the same dataset (by content fingerprint),
/// the same fold count, and the same master seed — i.e. the same fold
/// plan — otherwise the fold scores are not paired observations and the
/// comparison is refused.
pub fn compare(results: &[CvResult]) -> Result<Comparison> {
    if results.len() < 2 {
        return Err(VscError::Parameter(
            "need at least two results to compare".into(),
        ));
    }
    let first = &results[0];
    for r in results {
        if r.dataset_id != first.dataset_id {
            return Err(VscError::Mismatch(format!(
                "results cover different datasets ({} vs {})",
                first.dataset_source, r.dataset_source
            )));
        }
        if r.n_folds != first.n_folds || r.fold_f1.len() != first.fold_f1.len() {
            return Err(VscError::Mismatch(format!(
                "results use different fold counts ({} vs {})",
                first.n_folds, r.n_folds
            )));
        }
        if r.seed != first.seed {
            return Err(VscError::Mismatch(format!(
                "results use different seeds ({} vs {}), so folds are not paired",
                first.seed, r.seed
            )));
        }
    }

    let n = results.len();
    let mut cells: Vec<Vec<Option<ComparisonCell>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let test = paired_t_test(&results[i].fold_f1, &results[j].fold_f1)?;
            let direction = if results[i].mean_f1 > results[j].mean_f1 {
                Direction::Better
            } else if results[i].mean_f1 < results[j].mean_f1 {
                Direction::Worse
            } else {
                Direction::Even
            };
            cells[i][j] = Some(ComparisonCell { test, direction });
        }
    }

    let mean_f1: Vec<f64> = results.iter().map(|r| r.mean_f1).collect();
    let ranks = rankings(&mean_f1, RANK_TIE_EPS);
    Ok(Comparison {
        classifier_ids: results.iter().map(|r| r.classifier_id.clone()).collect(),
        mean_f1,
        std_f1: results.iter().map(|r| r.std_f1).collect(),
        ranks,
        cells,
        dataset_id: first.dataset_id.clone(),
        dataset_source: first.dataset_source.clone(),
        n_folds: first.n_folds,
        seed: first.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::cv::ScaleMode;
    use crate::eval::mean_std;

    fn result(id: &str, fold_f1: Vec<f64>) -> CvResult {
        let (mean_f1, std_f1) = mean_std(&fold_f1);
        CvResult {
            classifier_id: id.into(),
            params: vec![],
            dataset_id: "abcd".into(),
            dataset_source: "test".into(),
            n_folds: fold_f1.len(),
            seed: 7,
            scale_mode: ScaleMode::PerFold,
            fold_f1,
            mean_f1,
            std_f1,
        }
    }

    #[test]
    fn ranking_examples() {
        // Chained ties: 0.95 and 0.9502 tie; 0.90 ranks third.
        assert_eq!(rankings(&[0.95, 0.9502, 0.90], RANK_TIE_EPS), vec![1, 1, 3]);
        // No ties.
        assert_eq!(rankings(&[0.5, 0.9, 0.7], RANK_TIE_EPS), vec![3, 1, 2]);
        // All tied.
        assert_eq!(rankings(&[0.5, 0.5, 0.5], RANK_TIE_EPS), vec![1, 1, 1]);
        // Transitive chaining: each neighbor is within eps although the
        // extremes are not.
        assert_eq!(
            rankings(&[0.9500, 0.9508, 0.9516], RANK_TIE_EPS),
            vec![1, 1, 1]
        );
        assert_eq!(rankings(&[], RANK_TIE_EPS), Vec::<usize>::new());
    }

    #[test]
    fn compare_detects_a_clear_winner() {
        let strong = result("strong", vec![0.95, 0.96, 0.97, 0.95, 0.96, 0.97, 0.95, 0.96]);
        let weak = result("weak", vec![0.80, 0.82, 0.81, 0.80, 0.83, 0.82, 0.81, 0.80]);
        let c = compare(&[strong, weak]).unwrap();
        assert_eq!(c.ranks, vec![1, 2]);
        let cell = c.cells[0][1].unwrap();
        assert_eq!(cell.direction, Direction::Better);
        assert!(cell.test.significant);
        assert!(cell.test.t_stat > 0.0);
        // Marks: the weak model is significantly worse than reference 0,
        // the strong one significantly better than reference 1.
        assert_eq!(c.mark_against(1, 0), "▼");
        assert_eq!(c.mark_against(0, 1), "△");
        assert_eq!(c.mark_against(0, 0), "");
        // The matrix is antisymmetric in t and symmetric in p.
        let mirror = c.cells[1][0].unwrap();
        assert_eq!(mirror.test.t_stat, -cell.test.t_stat);
        assert_eq!(mirror.test.p_value, cell.test.p_value);
        assert_eq!(mirror.direction, Direction::Worse);
    }

    #[test]
    fn identical_runs_tie_without_marks() {
        let a = result("a", vec![0.9, 0.8, 0.85, 0.9]);
        let b = result("b", vec![0.9, 0.8, 0.85, 0.9]);
        let c = compare(&[a, b]).unwrap();
        assert_eq!(c.ranks, vec![1, 1]);
        let cell = c.cells[0][1].unwrap();
        assert_eq!(cell.test.p_value, 1.0);
        assert_eq!(cell.direction, Direction::Even);
        assert!(!cell.test.significant);
        assert_eq!(c.mark_against(0, 1), "");
        assert_eq!(c.mark_against(1, 0), "");
    }

    #[test]
    fn refuses_unpaired_results() {
        let a = result("a", vec![0.9, 0.8, 0.85]);
        let mut b = result("b", vec![0.9, 0.8, 0.85]);
        b.dataset_id = "zzzz".into();
        assert!(matches!(
            compare(&[a.clone(), b]),
            Err(VscError::Mismatch(_))
        ));

        let mut b = result("b", vec![0.9, 0.8, 0.85, 0.9]);
        b.n_folds = 4;
        assert!(matches!(
            compare(&[a.clone(), b]),
            Err(VscError::Mismatch(_))
        ));

        let mut b = result("b", vec![0.9, 0.8, 0.85]);
        b.seed = 8;
        assert!(matches!(
            compare(&[a.clone(), b]),
            Err(VscError::Mismatch(_))
        ));

        assert!(matches!(compare(&[a]), Err(VscError::Parameter(_))));
    }
}
