//! Synthetic benchmark generators: twonorm, ringnorm, and an XOR blob
//! layout that defeats any single-feature threshold.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::data::Dataset;
use crate::error::{Result, VscError};
use crate::linalg::{Matrix, Vector};

fn feature_names(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("f{i}")).collect()
}

fn check_n_dim(n: usize, dim: usize) -> Result<()> {
    if n < 2 {
        return Err(VscError::Parameter(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    if dim == 0 {
        return Err(VscError::Parameter("dimension must be at least 1".into()));
    }
    Ok(())
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Two unit-variance Gaussians with means `+-a * (1,..,1)`, `a = 2/sqrt(dim)`.
/// Labels alternate `+1, -1, ...` so classes are balanced up to one sample.
pub fn gen_twonorm(n: usize, dim: usize, seed: u64) -> Result<Dataset> {
    check_n_dim(n, dim)?;
    let a = 2.0 / (dim as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(n * dim);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = if i % 2 == 0 { 1.0 } else { -1.0 };
        let mean = label * a;
        for _ in 0..dim {
            data.push(mean + normal(&mut rng));
        }
        labels.push(label);
    }
    Dataset::new(
        Matrix::new(n, dim, data)?,
        Vector::new(labels)?,
        feature_names(dim),
        "1",
        "-1",
        format!("twonorm(n={n},dim={dim},seed={seed})"),
    )
}

/// The positive class is a wide Gaussian (standard deviation 2) at the
/// origin; the negative class is a unit Gaussian at `a * (1,..,1)`,
/// `a = 2/sqrt(dim)`. Labels alternate as in [`gen_twonorm`].
pub fn gen_ringnorm(n: usize, dim: usize, seed: u64) -> Result<Dataset> {
    check_n_dim(n, dim)?;
    let a = 2.0 / (dim as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(n * dim);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        if i % 2 == 0 {
            for _ in 0..dim {
                data.push(2.0 * normal(&mut rng));
            }
            labels.push(1.0);
        } else {
            for _ in 0..dim {
                data.push(a + normal(&mut rng));
            }
            labels.push(-1.0);
        }
    }
    Dataset::new(
        Matrix::new(n, dim, data)?,
        Vector::new(labels)?,
        feature_names(dim),
        "1",
        "-1",
        format!("ringnorm(n={n},dim={dim},seed={seed})"),
    )
}

/// Four Gaussian blobs at `(+-1, +-1)` with standard deviation `noise`,
/// labeled in an XOR pattern: blobs whose center coordinates have opposite
/// signs are positive. No axis-aligned or diagonal threshold separates the
/// classes well, while a locality-aware model can.
pub fn gen_xor_blobs(n: usize, noise: f64, seed: u64) -> Result<Dataset> {
    check_n_dim(n, 2)?;
    if !noise.is_finite() || noise < 0.0 {
        return Err(VscError::Parameter(format!(
            "noise must be finite and non-negative, got {noise}"
        )));
    }
    const CENTERS: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(n * 2);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let (cx, cy) = CENTERS[i % 4];
        data.push(cx + noise * normal(&mut rng));
        data.push(cy + noise * normal(&mut rng));
        labels.push(if cx * cy < 0.0 { 1.0 } else { -1.0 });
    }
    Dataset::new(
        Matrix::new(n, 2, data)?,
        Vector::new(labels)?,
        feature_names(2),
        "1",
        "-1",
        format!("xor_blobs(n={n},noise={noise},seed={seed})"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twonorm_is_balanced_and_reproducible() {
        let a = gen_twonorm(200, 5, 42).unwrap();
        let b = gen_twonorm(200, 5, 42).unwrap();
        let c = gen_twonorm(200, 5, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.x(), c.x());
        assert_eq!(a.class_counts(), (100, 100));
        assert_eq!(a.n_features(), 5);
        assert_eq!(a.feature_names()[0], "f1");

        // Class means straddle the origin along every coordinate.
        let mut pos_mean = 0.0;
        let mut neg_mean = 0.0;
        for i in 0..200 {
            let s: f64 = a.x().row(i).iter().sum();
            if a.y().get(i) == 1.0 {
                pos_mean += s;
            } else {
                neg_mean += s;
            }
        }
        assert!(pos_mean > 0.0 && neg_mean < 0.0);
    }

    #[test]
    fn ringnorm_positive_class_has_larger_spread() {
        let d = gen_ringnorm(400, 8, 7).unwrap();
        let (mut pos_sq, mut pos_n, mut neg_sq, mut neg_n) = (0.0, 0, 0.0, 0);
        for i in 0..400 {
            let sq: f64 = d.x().row(i).iter().map(|v| v * v).sum();
            if d.y().get(i) == 1.0 {
                pos_sq += sq;
                pos_n += 1;
            } else {
                neg_sq += sq;
                neg_n += 1;
            }
        }
        assert!(pos_sq / pos_n as f64 > 2.0 * (neg_sq / neg_n as f64));
    }

    #[test]
    fn xor_blobs_defeat_single_thresholds() {
        let d = gen_xor_blobs(1000, 0.2, 1).unwrap();
        assert_eq!(d.class_counts(), (500, 500));
        // Samples cluster tightly around their centers.
        for i in 0..1000 {
            let row = d.x().row(i);
            assert!((row[0].abs() - 1.0).abs() < 1.0);
            assert!((row[1].abs() - 1.0).abs() < 1.0);
            let expect = if row[0].signum() * row[1].signum() < 0.0 {
                1.0
            } else {
                -1.0
            };
            assert_eq!(d.y().get(i), expect);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(gen_twonorm(1, 5, 0).is_err());
        assert!(gen_twonorm(10, 0, 0).is_err());
        assert!(gen_xor_blobs(10, -0.5, 0).is_err());
        assert!(gen_xor_blobs(10, f64::NAN, 0).is_err());
    }
}
