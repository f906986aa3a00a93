//! The common prediction interface.

use crate::error::Result;
use crate::linalg::Matrix;

/// Sign convention shared by every model: zero maps to `+1`.
pub fn sign(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// A fitted binary classifier producing labels in `{-1, +1}`.
pub trait Classifier: Send + Sync {
    /// Predicts the label of one sample.
    fn predict(&self, x: &[f64]) -> Result<f64>;

    /// Predicts every row of `x` in order.
    fn predict_batch(&self, x: &Matrix) -> Result<Vec<f64>> {
        (0..x.rows()).map(|i| self.predict(x.row(i))).collect()
    }
}

/// Predicts a fixed label regardless of input; a degenerate baseline and
/// a fallback when training data contains a single class.
#[derive(Debug, Clone, Copy)]
pub struct ConstantClassifier {
    label: f64,
}

impl ConstantClassifier {
    pub fn new(label: f64) -> crate::error::Result<Self> {
        if label != 1.0 && label != -1.0 {
            return Err(crate::error::VscError::Parameter(
                "constant label must be -1 or +1".into(),
            ));
        }
        Ok(Self { label })
    }
}

impl Classifier for ConstantClassifier {
    fn predict(&self, _x: &[f64]) -> Result<f64> {
        Ok(self.label)
    }
}
