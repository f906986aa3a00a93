//! Confidence heat maps over a 2-D lattice.

use crate::error::{Result, VscError};
use crate::model::{Hyperplane, Pair};

/// Confidence values of one pair's hyperplane sampled on a regular grid.
/// `values` is row-major with `ys` as rows: `values[iy * xs.len() + ix]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
}

impl ConfidenceGrid {
    pub fn value(&self, iy: usize, ix: usize) -> f64 {
        self.values[iy * self.xs.len() + ix]
    }

    /// Long-form CSV: `x,y,confidence`, iterating rows (y) then columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,confidence\n");
        for (iy, y) in self.ys.iter().enumerate() {
            for (ix, x) in self.xs.iter().enumerate() {
                out.push_str(&format!("{x},{y},{}\n", self.value(iy, ix)));
            }
        }
        out
    }
}

/// `n` lattice coordinates from `lo` to `hi` inclusive. The convex
/// combination `(lo*(n-1-i) + hi*i) / (n-1)` makes the lattice exactly
/// symmetric when `lo == -hi` (the midpoint of an odd `n` is exactly 0).
fn lattice(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| (lo * (n - 1 - i) as f64 + hi * i as f64) / last)
        .collect()
}

/// Evaluates the confidence of `pair`'s hyperplane over a regular
/// `resolution x resolution` grid covering `x_range` times `y_range`.
/// Both grid endpoints are included; `resolution` must be at least 2 and
/// the pair two-dimensional. Every cell lies strictly inside `(0, 1)`.
pub fn confidence_grid(
    pair: &Pair,
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: usize,
    epsilon: f64,
) -> Result<ConfidenceGrid> {
    if pair.dim() != 2 {
        return Err(VscError::Shape(format!(
            "heat maps need 2-D pairs, got dimension {}",
            pair.dim()
        )));
    }
    if resolution < 2 {
        return Err(VscError::Parameter(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    for (lo, hi) in [x_range, y_range] {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(VscError::Parameter(format!(
                "invalid grid range [{lo}, {hi}]"
            )));
        }
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(VscError::Parameter(format!(
            "epsilon must be finite and positive, got {epsilon}"
        )));
    }

    let hyperplane = Hyperplane::from_pair(pair.clone());
    let xs = lattice(x_range.0, x_range.1, resolution);
    let ys = lattice(y_range.0, y_range.1, resolution);
    let mut values = Vec::with_capacity(resolution * resolution);
    for y in &ys {
        for x in &xs {
            values.push(hyperplane.confidence(&[*x, *y], epsilon));
        }
    }
    Ok(ConfidenceGrid { xs, ys, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_pair() -> Pair {
        Pair::new(vec![5.0, 0.0], vec![-5.0, 0.0]).unwrap()
    }

    fn default_grid() -> ConfidenceGrid {
        confidence_grid(&default_pair(), (-10.0, 10.0), (-10.0, 10.0), 201, 0.01).unwrap()
    }

    #[test]
    fn lattice_hits_key_points_exactly() {
        let xs = lattice(-10.0, 10.0, 201);
        assert_eq!(xs[0], -10.0);
        assert_eq!(xs[200], 10.0);
        assert_eq!(xs[100], 0.0);
        assert_eq!(xs[50], -5.0);
        assert_eq!(xs[150], 5.0);
        // Exact mirror symmetry (+-0.0 compare equal at the center).
        for i in 0..=200 {
            assert_eq!(xs[i], -xs[200 - i]);
        }
    }

    #[test]
    fn center_cell_is_exactly_half_and_endpoints_high() {
        let g = default_grid();
        assert_eq!(g.value(100, 100), 0.5);
        assert!(g.value(100, 50) > 0.999);
        assert!(g.value(100, 150) > 0.999);
    }

    #[test]
    fn grid_is_mirror_symmetric_for_a_symmetric_pair() {
        let g = default_grid();
        for iy in 0..201 {
            for ix in 0..201 {
                let a = g.value(iy, ix);
                let b = g.value(iy, 200 - ix);
                assert!(
                    (a - b).abs() <= 1e-12,
                    "asymmetry {} at ({iy},{ix})",
                    (a - b).abs()
                );
            }
        }
    }

    #[test]
    fn all_cells_inside_open_unit_interval() {
        let g = default_grid();
        assert_eq!(g.values.len(), 201 * 201);
        for &v in &g.values {
            assert!(v > 0.0 && v < 1.0);
        }
    }

    #[test]
    fn csv_layout() {
        let g = confidence_grid(&default_pair(), (-1.0, 1.0), (-1.0, 1.0), 3, 0.01).unwrap();
        let csv = g.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[0], "x,y,confidence");
        assert!(lines[1].starts_with("-1,-1,"));
        assert!(lines[5].starts_with("0,0,"));
        assert!(lines[9].starts_with("1,1,"));
    }

    #[test]
    fn validation_errors() {
        let p = default_pair();
        assert!(confidence_grid(&p, (-1.0, 1.0), (-1.0, 1.0), 1, 0.01).is_err());
        assert!(confidence_grid(&p, (1.0, -1.0), (-1.0, 1.0), 10, 0.01).is_err());
        assert!(confidence_grid(&p, (-1.0, 1.0), (-1.0, 1.0), 10, 0.0).is_err());
        let p3 = Pair::new(vec![1.0, 0.0, 0.0], vec![-1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            confidence_grid(&p3, (-1.0, 1.0), (-1.0, 1.0), 10, 0.01),
            Err(VscError::Shape(_))
        ));
    }
}
