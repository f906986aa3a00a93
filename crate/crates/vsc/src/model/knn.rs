//! k-nearest-neighbors baseline with fully specified tie-breaking.

use crate::data::Dataset;
use crate::error::{Result, VscError};
use crate::linalg::{Matrix, Vector};
use crate::model::classifier::{sign, Classifier};
use crate::model::hyperplane::sq_dist;

/// A fitted (memorized) k-NN classifier. Distance ties are broken by the
/// lower training index; voting ties predict `+1`.
#[derive(Debug, Clone)]
pub struct KnnModel {
    x: Matrix,
    y: Vector,
    neighbors: usize,
}

/// Stores the training set. `neighbors` must be between 1 and the number
/// of training samples.
pub fn fit_knn(data: &Dataset, neighbors: usize) -> Result<KnnModel> {
    if neighbors == 0 {
        return Err(VscError::Parameter(
            "neighbor count must be at least 1".into(),
        ));
    }
    if neighbors > data.n_samples() {
        return Err(VscError::Parameter(format!(
            "{neighbors} neighbors requested with only {} training samples",
            data.n_samples()
        )));
    }
    Ok(KnnModel {
        x: data.x().clone(),
        y: data.y().clone(),
        neighbors,
    })
}

impl KnnModel {
    pub fn neighbors(&self) -> usize {
        self.neighbors
    }

    pub fn dim(&self) -> usize {
        self.x.cols()
    }
}

impl Classifier for KnnModel {
    fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.x.cols() {
            return Err(VscError::Shape(format!(
                "sample has dimension {}, model expects {}",
                x.len(),
                self.x.cols()
            )));
        }
        let mut dists: Vec<(f64, usize)> = (0..self.x.rows())
            .map(|i| (sq_dist(self.x.row(i), x), i))
            .collect();
        dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let votes: f64 = dists[..self.neighbors]
            .iter()
            .map(|&(_, i)| self.y.get(i))
            .sum();
        Ok(sign(votes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_dataset() -> Dataset {
        let rows = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![5.0, 5.0],
            vec![6.0, 5.0],
            vec![5.0, 6.0],
        ];
        let y = Vector::new(vec![1.0, 1.0, 1.0, -1.0, -1.0, -1.0]).unwrap();
        Dataset::new(
            Matrix::from_rows(&rows).unwrap(),
            y,
            vec!["a".into(), "b".into()],
            "1",
            "-1",
            "grid",
        )
        .unwrap()
    }

    #[test]
    fn majority_vote() {
        let model = fit_knn(&grid_dataset(), 3).unwrap();
        assert_eq!(model.predict(&[0.2, 0.2]).unwrap(), 1.0);
        assert_eq!(model.predict(&[5.2, 5.2]).unwrap(), -1.0);
    }

    #[test]
    fn distance_ties_use_lower_training_index() {
        // Probe equidistant from index 1 (+1) and index 3 (-1).
        let rows = vec![vec![0.0], vec![1.0], vec![10.0], vec![3.0]];
        let y = Vector::new(vec![1.0, 1.0, 1.0, -1.0]).unwrap();
        let data = Dataset::new(
            Matrix::from_rows(&rows).unwrap(),
            y,
            vec!["a".into()],
            "1",
            "-1",
            "t",
        )
        .unwrap();
        let model = fit_knn(&data, 1).unwrap();
        // Probe at 2.0: indices 1 and 3 are both at distance 1; index 1
        // wins and votes +1.
        assert_eq!(model.predict(&[2.0]).unwrap(), 1.0);
    }

    #[test]
    fn vote_ties_predict_positive() {
        let model = fit_knn(&grid_dataset(), 6).unwrap();
        // All six neighbors vote: three +1, three -1.
        assert_eq!(model.predict(&[2.5, 2.5]).unwrap(), 1.0);
    }

    #[test]
    fn validates_neighbor_count() {
        let data = grid_dataset();
        assert!(fit_knn(&data, 0).is_err());
        assert!(fit_knn(&data, 7).is_err());
        assert!(fit_knn(&data, 6).is_ok());
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let model = fit_knn(&grid_dataset(), 1).unwrap();
        assert!(model.predict(&[1.0]).is_err());
    }
}
