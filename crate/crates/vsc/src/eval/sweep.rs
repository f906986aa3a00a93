//! Capacity/regularization grid sweeps with baseline normalization.

use rayon::prelude::*;

use crate::data::{Dataset, FoldPlan};
use crate::error::{Result, VscError};
use crate::eval::cv::{run_cv, ClassifierSpec, CvResult, ScaleMode};

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub k: usize,
    pub lambda: f64,
    pub result: CvResult,
    /// Mean F1 divided by the normalization reference.
    pub normalized_mean_f1: f64,
}

/// A full sweep over the cartesian product of `k` and `lambda` values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    /// Row-major: `k` outer, `lambda` inner, in the order given.
    pub points: Vec<SweepPoint>,
    /// Human-readable description of what the scores are normalized by.
    pub reference: String,
}

/// An external normalization baseline: a mean F1, optionally tagged with
/// the grid point it belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselinePoint {
    pub k: Option<usize>,
    pub lambda: Option<f64>,
    pub mean_f1: f64,
}

/// Evaluates `base` at every `(k, lambda)` grid point with shared folds,
/// then normalizes every mean F1 by the score at `reference`.
///
/// All grid points reuse the same fold plan and master seed, so scores
/// are comparable across the grid. The reference point must be part of
/// the grid; its normalized score is exactly 1.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    data: &Dataset,
    base: &ClassifierSpec,
    ks: &[usize],
    lambdas: &[f64],
    folds: &FoldPlan,
    scale: ScaleMode,
    seed: u64,
    reference: (usize, f64),
) -> Result<SweepGrid> {
    if ks.is_empty() || lambdas.is_empty() {
        return Err(VscError::Parameter("empty sweep grid".into()));
    }
    let (ref_k, ref_lambda) = reference;
    if !ks.contains(&ref_k) || !lambdas.contains(&ref_lambda) {
        return Err(VscError::Parameter(format!(
            "reference point (k={ref_k}, lambda={ref_lambda}) is not on the grid"
        )));
    }

    let grid: Vec<(usize, f64)> = ks
        .iter()
        .flat_map(|&k| lambdas.iter().map(move |&l| (k, l)))
        .collect();
    let results: Vec<CvResult> = grid
        .par_iter()
        .map(|&(k, lambda)| run_cv(data, &base.with_grid_point(k, lambda), folds, scale, seed))
        .collect::<Result<_>>()?;

    let ref_mean = grid
        .iter()
        .zip(&results)
        .find(|((k, l), _)| *k == ref_k && *l == ref_lambda)
        .map(|(_, r)| r.mean_f1)
        .expect("reference verified on the grid");
    if ref_mean == 0.0 {
        return Err(VscError::Numerical(
            "reference grid point has zero mean F1; cannot normalize".into(),
        ));
    }

    let points = grid
        .into_iter()
        .zip(results)
        .map(|((k, lambda), result)| SweepPoint {
            k,
            lambda,
            normalized_mean_f1: result.mean_f1 / ref_mean,
            result,
        })
        .collect();
    Ok(SweepGrid {
        points,
        reference: format!("{}(k={ref_k},lambda={ref_lambda})", base.id()),
    })
}

/// Renormalizes a sweep against external baseline scores.
///
/// With a single baseline point, its mean F1 divides every grid score.
/// With several, each grid point must match exactly one baseline point by
/// `(k, lambda)`. Baseline means must be nonzero.
pub fn normalize_against(
    grid: &mut SweepGrid,
    baseline: &[BaselinePoint],
    description: &str,
) -> Result<()> {
    if baseline.is_empty() {
        return Err(VscError::Parameter("empty normalization baseline".into()));
    }
    for point in &mut grid.points {
        let reference = if baseline.len() == 1 {
            &baseline[0]
        } else {
            let matches: Vec<&BaselinePoint> = baseline
                .iter()
                .filter(|b| b.k == Some(point.k) && b.lambda == Some(point.lambda))
                .collect();
            match matches.as_slice() {
                [one] => *one,
                [] => {
                    return Err(VscError::Mismatch(format!(
                        "no baseline entry for grid point (k={}, lambda={})",
                        point.k, point.lambda
                    )))
                }
                _ => {
                    return Err(VscError::Mismatch(format!(
                        "multiple baseline entries for grid point (k={}, lambda={})",
                        point.k, point.lambda
                    )))
                }
            }
        };
        if reference.mean_f1 == 0.0 {
            return Err(VscError::Numerical(
                "baseline mean F1 is zero; cannot normalize".into(),
            ));
        }
        point.normalized_mean_f1 = point.result.mean_f1 / reference.mean_f1;
    }
    grid.reference = description.to_string();
    Ok(())
}
