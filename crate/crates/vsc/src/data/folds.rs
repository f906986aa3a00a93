//! Stratified cross-validation folds.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Result, VscError};
use crate::linalg::Vector;

/// A fixed assignment of samples to cross-validation folds.
///
/// Build one with [`stratified_folds`] and reuse it across classifiers so
/// they are evaluated on identical splits.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldPlan {
    n_folds: usize,
    assignment: Vec<usize>,
    degraded: bool,
}

impl FoldPlan {
    pub fn n_folds(&self) -> usize {
        self.n_folds
    }

    /// Fold index per sample.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn n_samples(&self) -> usize {
        self.assignment.len()
    }

    /// True when some class has fewer members than folds, so not every
    /// fold can contain every class.
    pub fn is_degraded(&self) -> bool {
        self.degraded
    }

    /// Train and test indices for one fold, both in ascending order.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        assert!(fold < self.n_folds, "fold index out of range");
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (i, &f) in self.assignment.iter().enumerate() {
            if f == fold {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (train, test)
    }
}

/// Assigns samples to `n_folds` stratified folds.
///
/// Within each class the samples are shuffled and dealt round-robin; the
/// dealing cursor carries over between classes so overall fold sizes also
/// differ by at most one. Requires `2 <= n_folds <=` number of samples.
pub fn stratified_folds(y: &Vector, n_folds: usize, rng: &mut impl Rng) -> Result<FoldPlan> {
    if n_folds < 2 {
        return Err(VscError::Parameter(format!(
            "need at least 2 folds, got {n_folds}"
        )));
    }
    if n_folds > y.len() {
        return Err(VscError::Parameter(format!(
            "{n_folds} folds requested for {} samples",
            y.len()
        )));
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(VscError::Parameter(
            "labels must be exactly -1 or +1".into(),
        ));
    }

    let mut pos: Vec<usize> = (0..y.len()).filter(|&i| y.get(i) == 1.0).collect();
    let mut neg: Vec<usize> = (0..y.len()).filter(|&i| y.get(i) == -1.0).collect();
    let degraded = pos.len() < n_folds || neg.len() < n_folds;

    let mut assignment = vec![0usize; y.len()];
    let mut cursor = 0usize;
    for class in [&mut pos, &mut neg] {
        class.shuffle(rng);
        for &i in class.iter() {
            assignment[i] = cursor % n_folds;
            cursor += 1;
        }
    }
    Ok(FoldPlan {
        n_folds,
        assignment,
        degraded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn labels(pos: usize, neg: usize) -> Vector {
        let mut v = vec![1.0; pos];
        v.extend(std::iter::repeat_n(-1.0, neg));
        // Interleave a little so indices of each class are not contiguous.
        v.rotate_left(pos.min(3));
        Vector::new(v).unwrap()
    }

    #[test]
    fn folds_partition_and_balance() {
        let y = labels(57, 43);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let plan = stratified_folds(&y, 10, &mut rng).unwrap();
        assert!(!plan.is_degraded());

        let mut seen = [false; 100];
        let mut sizes = [0usize; 10];
        let mut pos_per_fold = [0usize; 10];
        for (i, &f) in plan.assignment().iter().enumerate() {
            assert!(f < 10);
            seen[i] = true;
            sizes[f] += 1;
            if y.get(i) == 1.0 {
                pos_per_fold[f] += 1;
            }
        }
        assert!(seen.iter().all(|&s| s));
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        assert!(
            pos_per_fold.iter().max().unwrap() - pos_per_fold.iter().min().unwrap() <= 1
        );

        // Equal class counts still give balanced overall folds.
        let y = labels(55, 55);
        let plan = stratified_folds(&y, 10, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let mut sizes = [0usize; 10];
        for &f in plan.assignment() {
            sizes[f] += 1;
        }
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn split_is_disjoint_and_ordered() {
        let y = labels(30, 30);
        let plan = stratified_folds(&y, 5, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        for fold in 0..5 {
            let (train, test) = plan.split(fold);
            assert_eq!(train.len() + test.len(), 60);
            assert!(train.windows(2).all(|w| w[0] < w[1]));
            assert!(test.windows(2).all(|w| w[0] < w[1]));
            let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..60).collect::<Vec<_>>());
        }
    }

    #[test]
    fn same_seed_same_plan() {
        let y = labels(40, 25);
        let a = stratified_folds(&y, 10, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = stratified_folds(&y, 10, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let c = stratified_folds(&y, 10, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.assignment(), c.assignment());
    }

    #[test]
    fn degraded_flag_and_parameter_errors() {
        let y = labels(3, 60);
        let plan = stratified_folds(&y, 10, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(plan.is_degraded());

        let y = labels(2, 2);
        assert!(stratified_folds(&y, 1, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
        assert!(stratified_folds(&y, 5, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }
}
