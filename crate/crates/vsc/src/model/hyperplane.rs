//! Opposite-class point pairs and the max-margin hyperplanes they induce.

use crate::error::{Result, VscError};

/// Minimum Euclidean separation for a pair to be usable.
pub const PAIR_SEPARATION_TOL: f64 = 1e-9;

/// Largest `f64` strictly below 1; used to keep confidences and features
/// inside their open intervals when the underlying transcendentals
/// saturate to exactly 1.
pub(crate) const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// A pair of points from opposite classes. Construction verifies the two
/// points have the same dimension, are finite, and are separated by more
/// than [`PAIR_SEPARATION_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct Pair {
    x_plus: Vec<f64>,
    x_minus: Vec<f64>,
}

impl Pair {
    pub fn new(x_plus: Vec<f64>, x_minus: Vec<f64>) -> Result<Self> {
        if x_plus.len() != x_minus.len() {
            return Err(VscError::Shape(format!(
                "pair points have dimensions {} and {}",
                x_plus.len(),
                x_minus.len()
            )));
        }
        if x_plus.is_empty() {
            return Err(VscError::Shape("pair points have dimension 0".into()));
        }
        if x_plus
            .iter()
            .chain(&x_minus)
            .any(|v| !v.is_finite())
        {
            return Err(VscError::NonFinite("pair coordinates".into()));
        }
        let pair = Self { x_plus, x_minus };
        if pair.separation_sq().sqrt() <= PAIR_SEPARATION_TOL {
            return Err(VscError::DegeneratePair);
        }
        Ok(pair)
    }

    /// The point drawn from the positive class.
    pub fn x_plus(&self) -> &[f64] {
        &self.x_plus
    }

    /// The point drawn from the negative class.
    pub fn x_minus(&self) -> &[f64] {
        &self.x_minus
    }

    pub fn dim(&self) -> usize {
        self.x_plus.len()
    }

    /// Squared Euclidean distance between the two points, accumulated
    /// left to right.
    pub fn separation_sq(&self) -> f64 {
        sq_dist(&self.x_plus, &self.x_minus)
    }
}

/// Squared Euclidean distance with a fixed left-to-right accumulation
/// order, so repeated evaluations are bitwise identical.
pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// Numerically stable logistic function; `sigmoid(0)` is exactly `0.5`.
pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// The max-margin hyperplane of a pair: the perpendicular bisector of the
/// segment from `x_minus` to `x_plus`, oriented toward the positive point.
///
/// Stores both the half-distance `d` and its square. The square is
/// computed directly from the squared separation (never via `d * d`), so
/// the confidence at the midpoint cancels exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    pair: Pair,
    normal: Vec<f64>,
    bias: f64,
    center: Vec<f64>,
    half_dist: f64,
    half_dist_sq: f64,
}

impl Hyperplane {
    /// Builds the hyperplane for a pair. Infallible: `Pair` construction
    /// already guarantees a usable separation.
    pub fn from_pair(pair: Pair) -> Self {
        let sep_sq = pair.separation_sq();
        let dist = sep_sq.sqrt();
        let normal: Vec<f64> = pair
            .x_plus
            .iter()
            .zip(&pair.x_minus)
            .map(|(p, m)| (p - m) / dist)
            .collect();
        let center: Vec<f64> = pair
            .x_plus
            .iter()
            .zip(&pair.x_minus)
            .map(|(p, m)| (p + m) / 2.0)
            .collect();
        let bias = normal.iter().zip(&center).map(|(n, c)| n * c).sum();
        Self {
            pair,
            normal,
            bias,
            center,
            half_dist: dist / 2.0,
            half_dist_sq: sep_sq / 4.0,
        }
    }

    /// Unit normal pointing from `x_minus` toward `x_plus`.
    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    /// Offset such that the plane is `{x : <normal, x> = bias}`.
    pub fn bias(&self) -> f64 {
        self.bias
    }

    /// Midpoint of the pair.
    pub fn center(&self) -> &[f64] {
        &self.center
    }

    /// Half the pair separation; the margin on each side.
    pub fn half_dist(&self) -> f64 {
        self.half_dist
    }

    pub fn pair(&self) -> &Pair {
        &self.pair
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Signed distance-like value `<normal, x> - bias`: positive on the
    /// `x_plus` side, negative on the `x_minus` side.
    ///
    /// Panics if `x` has the wrong dimension.
    pub fn signed_value(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim(), "point dimension mismatch");
        let dot: f64 = self.normal.iter().zip(x).map(|(n, v)| n * v).sum();
        dot - self.bias
    }

    /// Locality confidence in the open interval `(0, 1)`.
    ///
    /// High near either pair point, exactly `0.5` at the midpoint, and
    /// decaying toward `sigmoid(-2d/(d^2+epsilon))` far away, where `d` is
    /// the half-distance. `epsilon` softens all three denominators.
    ///
    /// Panics if `x` has the wrong dimension.
    pub fn confidence(&self, x: &[f64], epsilon: f64) -> f64 {
        assert_eq!(x.len(), self.dim(), "point dimension mismatch");
        let d = self.half_dist;
        let near_plus = d / (sq_dist(&self.pair.x_plus, x) + epsilon);
        let near_minus = d / (sq_dist(&self.pair.x_minus, x) + epsilon);
        let width = 2.0 * d / (self.half_dist_sq + epsilon);
        let c = sigmoid(near_plus + near_minus - width);
        c.clamp(f64::MIN_POSITIVE, BELOW_ONE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EPS: f64 = 0.01;

    fn axis_pair(d: f64) -> Pair {
        // Points at +-d along the first axis: half-distance d.
        Pair::new(vec![d, 0.0], vec![-d, 0.0]).unwrap()
    }

    #[test]
    fn pair_validation() {
        assert!(matches!(
            Pair::new(vec![1.0], vec![1.0, 2.0]),
            Err(VscError::Shape(_))
        ));
        assert!(matches!(
            Pair::new(vec![1.0, 2.0], vec![1.0, 2.0]),
            Err(VscError::DegeneratePair)
        ));
        assert!(matches!(
            Pair::new(vec![1.0, 2.0], vec![1.0, 2.0 + 1e-10]),
            Err(VscError::DegeneratePair)
        ));
        assert!(matches!(
            Pair::new(vec![f64::NAN, 0.0], vec![0.0, 0.0]),
            Err(VscError::NonFinite(_))
        ));
        assert!(Pair::new(vec![1.0, 2.0], vec![1.0, 2.1]).is_ok());
    }

    #[test]
    fn hyperplane_geometry() {
        let h = Hyperplane::from_pair(Pair::new(vec![3.0, 4.0], vec![1.0, 2.0]).unwrap());
        let norm: f64 = h.normal().iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-15);
        assert_eq!(h.center(), &[2.0, 3.0]);
        let half = (8.0f64).sqrt() / 2.0;
        assert!((h.half_dist() - half).abs() < 1e-15);
        // The pair endpoints sit at signed value +-half_dist.
        assert!((h.signed_value(&[3.0, 4.0]) - half).abs() < 1e-12);
        assert!((h.signed_value(&[1.0, 2.0]) + half).abs() < 1e-12);
        // The center lies on the plane.
        assert!(h.signed_value(h.center()).abs() < 1e-12);
    }

    #[test]
    fn confidence_is_half_at_center_and_high_at_endpoints() {
        let h = Hyperplane::from_pair(axis_pair(5.0));
        assert_eq!(h.confidence(&[0.0, 0.0], EPS), 0.5);
        assert!(h.confidence(&[5.0, 0.0], EPS) > 0.999);
        assert!(h.confidence(&[-5.0, 0.0], EPS) > 0.999);
        // Far away the confidence falls below 0.5.
        assert!(h.confidence(&[0.0, 100.0], EPS) < 0.5);
    }

    #[test]
    fn far_field_confidence_matches_closed_form() {
        // Pair at +-1 on the axis (d = 1) and a probe where both squared
        // distances are exactly 100.
        let h = Hyperplane::from_pair(axis_pair(1.0));
        let probe = [0.0, (99.0f64).sqrt()];
        let expected = 0.1234454024869408;
        let lo = 1.0 / (100.0 + EPS) + 1.0 / (100.0 + EPS) - 2.0 / (1.0 + EPS);
        assert!((sigmoid(lo) - expected).abs() < 1e-15);
        // The probe's squared distances round to 100 within an ulp or two,
        // so the confidence agrees to ~1e-14.
        assert!((h.confidence(&probe, EPS) - expected).abs() < 1e-13);
    }

    #[test]
    fn confidence_saturates_inside_open_interval() {
        // A huge separation saturates the sigmoid to 1.0 in f64; the
        // result must still be strictly below 1.
        let h = Hyperplane::from_pair(axis_pair(500.0));
        let c = h.confidence(&[500.0, 0.0], EPS);
        assert!((BELOW_ONE..1.0).contains(&c));
        // And an extremely remote probe must stay strictly above 0.
        let c = h.confidence(&[0.0, 1e300], EPS);
        assert!(c > 0.0 && c < 0.5);
    }

    #[test]
    fn confidence_increases_with_separation_at_fixed_offset() {
        for offset in [0.5, 2.0, 7.5] {
            let mut prev = -1.0;
            for step in 0..=90 {
                let d = 1.0 + 0.1 * step as f64;
                let h = Hyperplane::from_pair(axis_pair(d));
                let c = h.confidence(&[d + offset, 0.0], EPS);
                assert!(
                    c >= prev,
                    "confidence fell from {prev} to {c} at d={d}, offset={offset}"
                );
                prev = c;
            }
        }
    }

    proptest! {
        /// Pairs on a dyadic lattice (multiples of 2^-16) have exactly
        /// representable midpoints, and the confidence there is exactly 0.5.
        #[test]
        fn midpoint_confidence_is_exactly_half(
            raw in proptest::collection::vec((-65536i64 * 16..=65536 * 16, -65536i64 * 16..=65536 * 16), 1..=10),
        ) {
            let x_plus: Vec<f64> = raw.iter().map(|&(p, _)| p as f64 / 65536.0).collect();
            let x_minus: Vec<f64> = raw.iter().map(|&(_, m)| m as f64 / 65536.0).collect();
            prop_assume!(sq_dist(&x_plus, &x_minus).sqrt() > PAIR_SEPARATION_TOL);
            let h = Hyperplane::from_pair(Pair::new(x_plus, x_minus).unwrap());
            let center = h.center().to_vec();
            prop_assert_eq!(h.confidence(&center, EPS), 0.5);
        }

        #[test]
        fn confidence_always_in_open_unit_interval(
            coords in proptest::collection::vec((-100.0f64..100.0, -100.0f64..100.0, -100.0f64..100.0), 1..=6),
        ) {
            let x_plus: Vec<f64> = coords.iter().map(|c| c.0).collect();
            let x_minus: Vec<f64> = coords.iter().map(|c| c.1).collect();
            let probe: Vec<f64> = coords.iter().map(|c| c.2).collect();
            prop_assume!(sq_dist(&x_plus, &x_minus).sqrt() > PAIR_SEPARATION_TOL);
            let h = Hyperplane::from_pair(Pair::new(x_plus, x_minus).unwrap());
            let c = h.confidence(&probe, EPS);
            prop_assert!(c > 0.0 && c < 1.0);
        }
    }
}
