//! Dataset container, file formats, scaling, folds, and synthetic data.

mod csvio;
mod folds;
mod keel;
mod scale;
mod synth;

pub use csvio::{parse_csv, write_csv};
pub use folds::{stratified_folds, FoldPlan};
pub use keel::parse_keel;
pub use scale::Scaler;
pub use synth::{gen_ringnorm, gen_twonorm, gen_xor_blobs};

use sha2::{Digest, Sha256};

use crate::error::{Result, VscError};
use crate::linalg::{Matrix, Vector};

/// A binary classification dataset: an `N x n` feature matrix and labels
/// in `{-1, +1}`, plus the naming metadata needed to round-trip files.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Matrix,
    y: Vector,
    feature_names: Vec<String>,
    positive_class_name: String,
    negative_class_name: String,
    source: String,
}

impl Dataset {
    /// Validates and assembles a dataset. The label vector must match the
    /// feature matrix row count and contain only `-1.0` and `+1.0`.
    pub fn new(
        x: Matrix,
        y: Vector,
        feature_names: Vec<String>,
        positive_class_name: impl Into<String>,
        negative_class_name: impl Into<String>,
        source: impl Into<String>,
    ) -> Result<Self> {
        if y.len() != x.rows() {
            return Err(VscError::Shape(format!(
                "{} samples but {} labels",
                x.rows(),
                y.len()
            )));
        }
        if feature_names.len() != x.cols() {
            return Err(VscError::Shape(format!(
                "{} feature columns but {} feature names",
                x.cols(),
                feature_names.len()
            )));
        }
        if y.iter().any(|&v| v != 1.0 && v != -1.0) {
            return Err(VscError::Parameter(
                "labels must be exactly -1 or +1".into(),
            ));
        }
        Ok(Self {
            x,
            y,
            feature_names,
            positive_class_name: positive_class_name.into(),
            negative_class_name: negative_class_name.into(),
            source: source.into(),
        })
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &Vector {
        &self.y
    }

    pub fn n_samples(&self) -> usize {
        self.x.rows()
    }

    pub fn n_features(&self) -> usize {
        self.x.cols()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn positive_class_name(&self) -> &str {
        &self.positive_class_name
    }

    pub fn negative_class_name(&self) -> &str {
        &self.negative_class_name
    }

    /// Where the data came from (generator description or file name).
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Same dataset with a different source label. The source is
    /// descriptive only; it does not affect the fingerprint.
    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    /// Number of positive and negative samples.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.y.iter().filter(|&&v| v == 1.0).count();
        (pos, self.y.len() - pos)
    }

    /// Subset of the dataset given by `indices` (in that order), keeping
    /// all metadata.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let x = self.x.select_rows(indices)?;
        let y = Vector::new(indices.iter().map(|&i| self.y.get(i)).collect())?;
        Ok(Self {
            x,
            y,
            feature_names: self.feature_names.clone(),
            positive_class_name: self.positive_class_name.clone(),
            negative_class_name: self.negative_class_name.clone(),
            source: self.source.clone(),
        })
    }

    /// Same dataset with the feature matrix replaced (used after scaling).
    /// The replacement must have identical shape.
    pub fn with_x(&self, x: Matrix) -> Result<Self> {
        if x.rows() != self.x.rows() || x.cols() != self.x.cols() {
            return Err(VscError::Shape(
                "replacement feature matrix has a different shape".into(),
            ));
        }
        Ok(Self {
            x,
            y: self.y.clone(),
            feature_names: self.feature_names.clone(),
            positive_class_name: self.positive_class_name.clone(),
            negative_class_name: self.negative_class_name.clone(),
            source: self.source.clone(),
        })
    }

    /// Per-feature `(min, max)` over all samples. Errors when the dataset
    /// is empty.
    pub fn feature_ranges(&self) -> Result<Vec<(f64, f64)>> {
        if self.n_samples() == 0 {
            return Err(VscError::Parameter(
                "feature ranges of an empty dataset".into(),
            ));
        }
        let n = self.n_features();
        let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); n];
        for i in 0..self.n_samples() {
            for (r, &v) in ranges.iter_mut().zip(self.x.row(i)) {
                r.0 = r.0.min(v);
                r.1 = r.1.max(v);
            }
        }
        Ok(ranges)
    }

    /// Content fingerprint: 16 hex characters derived from a SHA-256 hash
    /// of the features, labels, and class/feature names. Identical data
    /// gives an identical fingerprint regardless of where it was loaded
    /// from.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.x.rows() as u64).to_le_bytes());
        h.update((self.x.cols() as u64).to_le_bytes());
        for v in self.x.data() {
            h.update(v.to_bits().to_le_bytes());
        }
        for v in self.y.iter() {
            h.update(v.to_bits().to_le_bytes());
        }
        for name in &self.feature_names {
            h.update(name.as_bytes());
            h.update([0]);
        }
        h.update(self.positive_class_name.as_bytes());
        h.update([0]);
        h.update(self.negative_class_name.as_bytes());
        let digest = h.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Dataset {
        let x = Matrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 3.0], vec![4.0, 5.0]]).unwrap();
        let y = Vector::new(vec![1.0, -1.0, 1.0]).unwrap();
        Dataset::new(x, y, vec!["a".into(), "b".into()], "pos", "neg", "test").unwrap()
    }

    #[test]
    fn validates_labels_and_shapes() {
        let x = Matrix::zeros(2, 2);
        let bad_y = Vector::new(vec![1.0, 0.5]).unwrap();
        assert!(Dataset::new(
            x.clone(),
            bad_y,
            vec!["a".into(), "b".into()],
            "p",
            "n",
            "t"
        )
        .is_err());
        let short_y = Vector::new(vec![1.0]).unwrap();
        assert!(
            Dataset::new(x, short_y, vec!["a".into(), "b".into()], "p", "n", "t").is_err()
        );
    }

    #[test]
    fn select_and_ranges() {
        let d = tiny();
        assert_eq!(d.class_counts(), (2, 1));
        let s = d.select(&[2, 0]).unwrap();
        assert_eq!(s.x().row(0), &[4.0, 5.0]);
        assert_eq!(s.y().as_slice(), &[1.0, 1.0]);
        assert_eq!(d.feature_ranges().unwrap(), vec![(0.0, 4.0), (1.0, 5.0)]);
    }

    #[test]
    fn fingerprint_tracks_content() {
        let d = tiny();
        let f1 = d.fingerprint();
        assert_eq!(f1.len(), 16);
        assert_eq!(f1, tiny().fingerprint());

        let other = d.select(&[0, 1]).unwrap();
        assert_ne!(f1, other.fingerprint());
    }
}
