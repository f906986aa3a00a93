//! Per-feature standardization (zero mean, unit variance).

use crate::error::{Result, VscError};
use crate::linalg::Matrix;

/// Scale factors below this are treated as a constant feature.
const MIN_SCALE: f64 = 1e-12;

/// Column-wise standardizer fitted on one matrix and applied to others.
///
/// Uses the population standard deviation. Near-constant columns (scale
/// below `1e-12`) keep a scale of `1` so they pass through unchanged after
/// centering.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaler {
    means: Vec<f64>,
    scales: Vec<f64>,
}

impl Scaler {
    /// Computes column means and standard deviations of `x`.
    pub fn fit(x: &Matrix) -> Result<Self> {
        if x.rows() == 0 {
            return Err(VscError::Parameter(
                "cannot fit a scaler on an empty matrix".into(),
            ));
        }
        let n = x.rows() as f64;
        let cols = x.cols();
        let mut means = vec![0.0; cols];
        for i in 0..x.rows() {
            for (m, v) in means.iter_mut().zip(x.row(i)) {
                *m += v;
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut vars = vec![0.0; cols];
        for i in 0..x.rows() {
            for ((s, m), v) in vars.iter_mut().zip(&means).zip(x.row(i)) {
                let d = v - m;
                *s += d * d;
            }
        }
        let scales = vars
            .iter()
            .map(|s| {
                let sd = (s / n).sqrt();
                if sd < MIN_SCALE {
                    1.0
                } else {
                    sd
                }
            })
            .collect();
        Ok(Self { means, scales })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// Applies `(v - mean) / scale` column-wise.
    pub fn transform(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.means.len() {
            return Err(VscError::Shape(format!(
                "scaler fitted on {} columns, input has {}",
                self.means.len(),
                x.cols()
            )));
        }
        let mut data = Vec::with_capacity(x.rows() * x.cols());
        for i in 0..x.rows() {
            for ((v, m), s) in x.row(i).iter().zip(&self.means).zip(&self.scales) {
                data.push((v - m) / s);
            }
        }
        Matrix::new(x.rows(), x.cols(), data)
    }

    /// Inverts [`Scaler::transform`]: `v * scale + mean`.
    pub fn inverse_transform(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.means.len() {
            return Err(VscError::Shape(format!(
                "scaler fitted on {} columns, input has {}",
                self.means.len(),
                x.cols()
            )));
        }
        let mut data = Vec::with_capacity(x.rows() * x.cols());
        for i in 0..x.rows() {
            for ((v, m), s) in x.row(i).iter().zip(&self.means).zip(&self.scales) {
                data.push(v * s + m);
            }
        }
        Matrix::new(x.rows(), x.cols(), data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standardizes_columns() {
        let x = Matrix::from_rows(&[vec![1.0, 10.0], vec![3.0, 10.0], vec![5.0, 10.0]]).unwrap();
        let s = Scaler::fit(&x).unwrap();
        assert_eq!(s.means(), &[3.0, 10.0]);
        // Population std of {1,3,5} is sqrt(8/3); the constant column keeps scale 1.
        assert!((s.scales()[0] - (8.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(s.scales()[1], 1.0);

        let t = s.transform(&x).unwrap();
        for j in 0..2 {
            let mean: f64 = (0..3).map(|i| t.get(i, j)).sum::<f64>() / 3.0;
            assert!(mean.abs() < 1e-15);
        }
        // Constant column is centered to zero and left unscaled.
        assert_eq!(t.get(0, 1), 0.0);
    }

    #[test]
    fn transform_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let data: Vec<f64> = (0..60).map(|_| rng.random_range(-50.0..50.0)).collect();
        let x = Matrix::new(12, 5, data).unwrap();
        let s = Scaler::fit(&x).unwrap();
        let back = s.inverse_transform(&s.transform(&x).unwrap()).unwrap();
        for (a, b) in back.data().iter().zip(x.data()) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn rejects_column_mismatch_and_empty() {
        let x = Matrix::zeros(3, 2);
        let s = Scaler::fit(&x).unwrap();
        assert!(s.transform(&Matrix::zeros(3, 4)).is_err());
        assert!(Scaler::fit(&Matrix::zeros(0, 2)).is_err());
    }
}
