//! Extreme learning machine baseline: one random tanh layer plus the same
//! ridge readout used by the pair-feature model.

use rand::Rng;
use rand_distr::{Distribution, Uniform};

use crate::data::Dataset;
use crate::error::{Result, VscError};
use crate::linalg::{ridge_solve, Matrix, Vector};
use crate::model::classifier::{sign, Classifier};

/// A fitted ELM: `hidden` random tanh units with weights (including a bias
/// term per unit) drawn uniformly from `[-1, 1]`, then a ridge-regressed
/// linear readout with its own bias.
#[derive(Debug, Clone)]
pub struct ElmModel {
    /// `hidden x (dim + 1)` row-major; column 0 is the unit's bias.
    input_weights: Matrix,
    readout: Vector,
    dim: usize,
}

fn hidden_row(input_weights: &Matrix, x: &[f64]) -> Vec<f64> {
    let hidden = input_weights.rows();
    let mut row = Vec::with_capacity(hidden + 1);
    row.push(1.0);
    for j in 0..hidden {
        let w = input_weights.row(j);
        let mut z = w[0];
        for (wi, xi) in w[1..].iter().zip(x) {
            z += wi * xi;
        }
        row.push(z.tanh());
    }
    row
}

/// Fits the baseline. `hidden` must be at least 1 and `lambda` positive.
pub fn fit_elm(data: &Dataset, hidden: usize, lambda: f64, rng: &mut impl Rng) -> Result<ElmModel> {
    if hidden == 0 {
        return Err(VscError::Parameter(
            "hidden unit count must be at least 1".into(),
        ));
    }
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(VscError::Parameter(format!(
            "lambda must be finite and positive, got {lambda}"
        )));
    }
    if data.n_samples() < 2 {
        return Err(VscError::Parameter(format!(
            "need at least 2 training samples, got {}",
            data.n_samples()
        )));
    }
    let dim = data.n_features();
    if dim == 0 {
        return Err(VscError::Parameter("training data has no features".into()));
    }

    let unit = Uniform::new_inclusive(-1.0, 1.0)
        .map_err(|e| VscError::Parameter(format!("uniform weight range: {e}")))?;
    let weights: Vec<f64> = (0..hidden * (dim + 1)).map(|_| unit.sample(rng)).collect();
    let input_weights = Matrix::new(hidden, dim + 1, weights)?;

    let mut features = Vec::with_capacity(data.n_samples() * (hidden + 1));
    for i in 0..data.n_samples() {
        features.extend(hidden_row(&input_weights, data.x().row(i)));
    }
    let design = Matrix::new(data.n_samples(), hidden + 1, features)?;
    let readout = ridge_solve(&design, data.y(), lambda)?;

    Ok(ElmModel {
        input_weights,
        readout,
        dim,
    })
}

impl ElmModel {
    pub fn hidden_units(&self) -> usize {
        self.input_weights.rows()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The raw readout whose sign is the prediction.
    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(VscError::Shape(format!(
                "sample has dimension {}, model expects {}",
                x.len(),
                self.dim
            )));
        }
        let row = hidden_row(&self.input_weights, x);
        Ok(row.iter().zip(self.readout.iter()).map(|(f, w)| f * w).sum())
    }
}

impl Classifier for ElmModel {
    fn predict(&self, x: &[f64]) -> Result<f64> {
        Ok(sign(self.decision_value(x)?))
    }
}
