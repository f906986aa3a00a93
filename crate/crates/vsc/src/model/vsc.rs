//! The pair-feature classifier: sampling, the feature map, and fitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Uniform};

use crate::data::Dataset;
use crate::error::{Result, VscError};
use crate::linalg::{ridge_solve, Matrix, Vector};
use crate::model::classifier::{sign, Classifier};
use crate::model::hyperplane::{Hyperplane, Pair, BELOW_ONE};

/// Consecutive degenerate draws tolerated per pair before sampling fails.
pub const MAX_PAIR_ATTEMPTS: usize = 100;

/// How the feature pairs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    /// One positive and one negative training point, uniformly with
    /// replacement.
    FromData,
    /// Both points uniform in the training data's per-feature bounding
    /// box, ignoring labels. The first drawn point takes the positive
    /// role.
    UniformBox,
}

/// Hyperparameters for [`VscModel::fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct VscConfig {
    /// Number of pairs (and therefore hyperplane features).
    pub k: usize,
    /// Ridge regularization strength; must be positive.
    pub lambda: f64,
    /// Softening constant in the confidence denominators; must be positive.
    pub epsilon: f64,
    /// When false, every confidence is replaced by 1.
    pub confidence_enabled: bool,
    pub pair_mode: PairMode,
    /// Seed for pair sampling.
    pub seed: u64,
}

impl Default for VscConfig {
    fn default() -> Self {
        Self {
            k: 100,
            lambda: 1.0,
            epsilon: 0.01,
            confidence_enabled: true,
            pair_mode: PairMode::FromData,
            seed: 0,
        }
    }
}

impl VscConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(VscError::Parameter("k must be at least 1".into()));
        }
        if !self.lambda.is_finite() || self.lambda <= 0.0 {
            return Err(VscError::Parameter(format!(
                "lambda must be finite and positive, got {}",
                self.lambda
            )));
        }
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(VscError::Parameter(format!(
                "epsilon must be finite and positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// Short identifier for the configured variant.
    pub fn variant_id(&self) -> String {
        let mut id = String::from("vsc");
        if self.pair_mode == PairMode::UniformBox {
            id.push_str("-uniform");
        }
        if !self.confidence_enabled {
            id.push_str("-noconf");
        }
        id
    }
}

/// Draws `k` opposite-class pairs uniformly with replacement from the
/// training data. Degenerate draws (coincident points) are retried up to
/// [`MAX_PAIR_ATTEMPTS`] times each.
pub fn sample_pairs(data: &Dataset, k: usize, rng: &mut impl Rng) -> Result<Vec<Pair>> {
    let pos: Vec<usize> = (0..data.n_samples())
        .filter(|&i| data.y().get(i) == 1.0)
        .collect();
    let neg: Vec<usize> = (0..data.n_samples())
        .filter(|&i| data.y().get(i) == -1.0)
        .collect();
    if pos.is_empty() {
        return Err(VscError::ClassMissing(1));
    }
    if neg.is_empty() {
        return Err(VscError::ClassMissing(-1));
    }

    let mut pairs = Vec::with_capacity(k);
    for _ in 0..k {
        let mut drawn = None;
        for _ in 0..MAX_PAIR_ATTEMPTS {
            let p = pos[rng.random_range(0..pos.len())];
            let n = neg[rng.random_range(0..neg.len())];
            match Pair::new(data.x().row(p).to_vec(), data.x().row(n).to_vec()) {
                Ok(pair) => {
                    drawn = Some(pair);
                    break;
                }
                Err(VscError::DegeneratePair) => continue,
                Err(e) => return Err(e),
            }
        }
        pairs.push(drawn.ok_or(VscError::SamplingExhausted {
            attempts: MAX_PAIR_ATTEMPTS,
        })?);
    }
    Ok(pairs)
}

/// Draws `k` pairs with both endpoints uniform in the per-feature box
/// `ranges`. The first point of each draw takes the positive role.
pub fn sample_pairs_uniform(
    ranges: &[(f64, f64)],
    k: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Pair>> {
    if ranges.is_empty() {
        return Err(VscError::Shape("empty feature ranges".into()));
    }
    let dists: Vec<Uniform<f64>> = ranges
        .iter()
        .map(|&(lo, hi)| {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(VscError::Parameter(format!(
                    "invalid feature range [{lo}, {hi}]"
                )));
            }
            Uniform::new_inclusive(lo, hi)
                .map_err(|e| VscError::Parameter(format!("feature range [{lo}, {hi}]: {e}")))
        })
        .collect::<Result<_>>()?;

    let mut pairs = Vec::with_capacity(k);
    for _ in 0..k {
        let mut drawn = None;
        for _ in 0..MAX_PAIR_ATTEMPTS {
            let first: Vec<f64> = dists.iter().map(|d| d.sample(rng)).collect();
            let second: Vec<f64> = dists.iter().map(|d| d.sample(rng)).collect();
            match Pair::new(first, second) {
                Ok(pair) => {
                    drawn = Some(pair);
                    break;
                }
                Err(VscError::DegeneratePair) => continue,
                Err(e) => return Err(e),
            }
        }
        pairs.push(drawn.ok_or(VscError::SamplingExhausted {
            attempts: MAX_PAIR_ATTEMPTS,
        })?);
    }
    Ok(pairs)
}

/// Maps one sample to its feature row `[1, f_1, .., f_k]`: a leading bias
/// entry, then per hyperplane `tanh(signed value) * confidence`. Every
/// non-bias feature lies strictly inside `(-1, 1)`.
pub fn feature_row(
    hyperplanes: &[Hyperplane],
    x: &[f64],
    epsilon: f64,
    confidence_enabled: bool,
) -> Result<Vec<f64>> {
    let mut row = Vec::with_capacity(hyperplanes.len() + 1);
    row.push(1.0);
    for h in hyperplanes {
        if x.len() != h.dim() {
            return Err(VscError::Shape(format!(
                "sample has dimension {}, hyperplanes expect {}",
                x.len(),
                h.dim()
            )));
        }
        let response = h.signed_value(x).tanh();
        let weighted = if confidence_enabled {
            response * h.confidence(x, epsilon)
        } else {
            response
        };
        row.push(weighted.clamp(-BELOW_ONE, BELOW_ONE));
    }
    Ok(row)
}

/// A fitted pair-feature classifier.
#[derive(Debug, Clone)]
pub struct VscModel {
    hyperplanes: Vec<Hyperplane>,
    weights: Vector,
    config: VscConfig,
    dim: usize,
}

impl VscModel {
    /// Fits the model: samples pairs, builds the feature matrix over the
    /// training data, and solves the ridge readout.
    pub fn fit(data: &Dataset, config: VscConfig) -> Result<Self> {
        config.validate()?;
        if data.n_samples() < 2 {
            return Err(VscError::Parameter(format!(
                "need at least 2 training samples, got {}",
                data.n_samples()
            )));
        }
        if data.n_features() == 0 {
            return Err(VscError::Parameter("training data has no features".into()));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let pairs = match config.pair_mode {
            PairMode::FromData => sample_pairs(data, config.k, &mut rng)?,
            PairMode::UniformBox => {
                sample_pairs_uniform(&data.feature_ranges()?, config.k, &mut rng)?
            }
        };
        let hyperplanes: Vec<Hyperplane> = pairs.into_iter().map(Hyperplane::from_pair).collect();

        let mut features = Vec::with_capacity(data.n_samples() * (config.k + 1));
        for i in 0..data.n_samples() {
            features.extend(feature_row(
                &hyperplanes,
                data.x().row(i),
                config.epsilon,
                config.confidence_enabled,
            )?);
        }
        let design = Matrix::new(data.n_samples(), config.k + 1, features)?;
        let weights = ridge_solve(&design, data.y(), config.lambda)?;

        Ok(Self {
            hyperplanes,
            weights,
            dim: data.n_features(),
            config,
        })
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    /// Readout weights `[w_0, w_1, .., w_k]`; `w_0` pairs with the bias
    /// feature.
    pub fn weights(&self) -> &Vector {
        &self.weights
    }

    pub fn config(&self) -> &VscConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The raw readout `<w, features(x)>` whose sign is the prediction.
    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(VscError::Shape(format!(
                "sample has dimension {}, model expects {}",
                x.len(),
                self.dim
            )));
        }
        let row = feature_row(
            &self.hyperplanes,
            x,
            self.config.epsilon,
            self.config.confidence_enabled,
        )?;
        Ok(row.iter().zip(self.weights.iter()).map(|(f, w)| f * w).sum())
    }
}

impl Classifier for VscModel {
    fn predict(&self, x: &[f64]) -> Result<f64> {
        Ok(sign(self.decision_value(x)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::gen_twonorm;

    fn toy_dataset() -> Dataset {
        // Two well-separated clusters in 2D.
        let rows = vec![
            vec![2.0, 2.0],
            vec![2.5, 1.8],
            vec![1.8, 2.2],
            vec![2.2, 2.6],
            vec![-2.0, -2.0],
            vec![-2.4, -1.7],
            vec![-1.9, -2.3],
            vec![-2.1, -2.5],
        ];
        let y = Vector::new(vec![1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0]).unwrap();
        Dataset::new(
            Matrix::from_rows(&rows).unwrap(),
            y,
            vec!["a".into(), "b".into()],
            "1",
            "-1",
            "toy",
        )
        .unwrap()
    }

    #[test]
    fn sample_pairs_respects_classes() {
        let data = toy_dataset();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pairs = sample_pairs(&data, 25, &mut rng).unwrap();
        assert_eq!(pairs.len(), 25);
        for p in &pairs {
            // Positive cluster lives in the upper-right quadrant.
            assert!(p.x_plus()[0] > 0.0);
            assert!(p.x_minus()[0] < 0.0);
        }
    }

    #[test]
    fn sample_pairs_requires_both_classes() {
        let data = toy_dataset();
        let pos_only = data.select(&[0, 1, 2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            sample_pairs(&pos_only, 5, &mut rng),
            Err(VscError::ClassMissing(-1))
        ));
        let neg_only = data.select(&[4, 5, 6, 7]).unwrap();
        assert!(matches!(
            sample_pairs(&neg_only, 5, &mut rng),
            Err(VscError::ClassMissing(1))
        ));
    }

    #[test]
    fn duplicate_points_exhaust_sampling() {
        // All positives coincide with all negatives: every draw is
        // degenerate.
        let rows = vec![vec![1.0, 1.0]; 4];
        let y = Vector::new(vec![1.0, 1.0, -1.0, -1.0]).unwrap();
        let data = Dataset::new(
            Matrix::from_rows(&rows).unwrap(),
            y,
            vec!["a".into(), "b".into()],
            "1",
            "-1",
            "dup",
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            sample_pairs(&data, 1, &mut rng),
            Err(VscError::SamplingExhausted { attempts: 100 })
        ));
    }

    #[test]
    fn uniform_box_sampling() {
        let ranges = [(0.0, 1.0), (-2.0, 2.0)];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pairs = sample_pairs_uniform(&ranges, 50, &mut rng).unwrap();
        assert_eq!(pairs.len(), 50);
        for p in &pairs {
            for point in [p.x_plus(), p.x_minus()] {
                assert!((0.0..=1.0).contains(&point[0]));
                assert!((-2.0..=2.0).contains(&point[1]));
            }
        }

        // A zero-volume box can only produce degenerate pairs.
        let degenerate = [(1.0, 1.0), (2.0, 2.0)];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(matches!(
            sample_pairs_uniform(&degenerate, 1, &mut rng),
            Err(VscError::SamplingExhausted { .. })
        ));

        assert!(sample_pairs_uniform(&[(2.0, 1.0)], 1, &mut rng).is_err());
    }

    #[test]
    fn feature_rows_have_bias_and_open_interval_features() {
        let data = toy_dataset();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pairs = sample_pairs(&data, 10, &mut rng).unwrap();
        let hyperplanes: Vec<Hyperplane> = pairs.into_iter().map(Hyperplane::from_pair).collect();
        for i in 0..data.n_samples() {
            let row = feature_row(&hyperplanes, data.x().row(i), 0.01, true).unwrap();
            assert_eq!(row.len(), 11);
            assert_eq!(row[0], 1.0);
            for &f in &row[1..] {
                assert!(f > -1.0 && f < 1.0);
            }
        }
    }

    #[test]
    fn fit_separates_toy_clusters() {
        let data = toy_dataset();
        let model = VscModel::fit(
            &data,
            VscConfig {
                k: 8,
                seed: 5,
                ..VscConfig::default()
            },
        )
        .unwrap();
        assert_eq!(model.weights().len(), 9);
        for i in 0..data.n_samples() {
            assert_eq!(model.predict(data.x().row(i)).unwrap(), data.y().get(i));
        }
        // Decision values agree in sign with predictions.
        let dv = model.decision_value(&[2.0, 2.0]).unwrap();
        assert!(dv > 0.0);
        let dv = model.decision_value(&[-2.0, -2.0]).unwrap();
        assert!(dv < 0.0);
    }

    #[test]
    fn fit_is_deterministic_in_the_seed() {
        let data = gen_twonorm(60, 4, 3).unwrap();
        let cfg = VscConfig {
            k: 20,
            seed: 11,
            ..VscConfig::default()
        };
        let a = VscModel::fit(&data, cfg.clone()).unwrap();
        let b = VscModel::fit(&data, cfg.clone()).unwrap();
        assert_eq!(a.weights(), b.weights());
        let c = VscModel::fit(
            &data,
            VscConfig {
                seed: 12,
                ..cfg
            },
        )
        .unwrap();
        assert_ne!(a.weights(), c.weights());
    }

    #[test]
    fn config_validation_and_variant_ids() {
        let data = toy_dataset();
        for bad in [
            VscConfig {
                k: 0,
                ..VscConfig::default()
            },
            VscConfig {
                lambda: 0.0,
                ..VscConfig::default()
            },
            VscConfig {
                lambda: -1.0,
                ..VscConfig::default()
            },
            VscConfig {
                epsilon: 0.0,
                ..VscConfig::default()
            },
        ] {
            assert!(matches!(
                VscModel::fit(&data, bad),
                Err(VscError::Parameter(_))
            ));
        }

        assert_eq!(VscConfig::default().variant_id(), "vsc");
        assert_eq!(
            VscConfig {
                confidence_enabled: false,
                ..VscConfig::default()
            }
            .variant_id(),
            "vsc-noconf"
        );
        assert_eq!(
            VscConfig {
                pair_mode: PairMode::UniformBox,
                ..VscConfig::default()
            }
            .variant_id(),
            "vsc-uniform"
        );
    }

    #[test]
    fn predict_rejects_wrong_dimension() {
        let data = toy_dataset();
        let model = VscModel::fit(&data, VscConfig::default()).unwrap();
        assert!(matches!(
            model.predict(&[1.0, 2.0, 3.0]),
            Err(VscError::Shape(_))
        ));
    }
}
