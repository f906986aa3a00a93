//! Minimal dense linear algebra: just enough for ridge regression.
//!
//! Everything here is deliberately small and deterministic. Matrices are
//! row-major `f64`, the solver is an unpivoted Cholesky factorization (the
//! systems we solve are symmetric positive definite by construction), and
//! [`ridge_solve`] checks its own residual so a bad solve can never leak
//! into a fitted model silently.

use crate::error::{Result, VscError};

/// Dense row-major matrix of `f64` values.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data. The data length must equal
    /// `rows * cols` and every entry must be finite.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(VscError::Shape(format!(
                "matrix data has {} entries, expected {rows}x{cols}={}",
                data.len(),
                rows * cols
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(VscError::NonFinite("matrix entries".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Builds a matrix from a slice of equally sized rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(VscError::Shape("rows have unequal lengths".into()));
        }
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            data.extend_from_slice(row);
        }
        Self::new(n_rows, n_cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at row `i`, column `j`. Panics if out of bounds.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        self.data[i * self.cols + j] = v;
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        assert!(i < self.rows, "row index out of bounds");
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Underlying row-major storage.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// New matrix containing the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            if i >= self.rows {
                return Err(VscError::Shape(format!(
                    "row index {i} out of bounds for {} rows",
                    self.rows
                )));
            }
            data.extend_from_slice(self.row(i));
        }
        Ok(Self {
            rows: indices.len(),
            cols: self.cols,
            data,
        })
    }

    /// Matrix-vector product `A v`.
    pub fn matvec(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(VscError::Shape(format!(
                "matvec: {} columns vs vector of length {}",
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![0.0; self.rows];
        for (i, row) in self.data.chunks_exact(self.cols).enumerate() {
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(v.as_slice()) {
                acc += a * b;
            }
            out[i] = acc;
        }
        Vector::new(out)
    }

    /// Transposed matrix-vector product `A^T v`.
    pub fn transpose_matvec(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.rows {
            return Err(VscError::Shape(format!(
                "transpose_matvec: {} rows vs vector of length {}",
                self.rows,
                v.len()
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (row, &s) in self.data.chunks_exact(self.cols).zip(v.as_slice()) {
            for (o, &a) in out.iter_mut().zip(row) {
                *o += s * a;
            }
        }
        Vector::new(out)
    }
}

/// Dense vector of finite `f64` values.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

impl Vector {
    /// Builds a vector, rejecting NaN and infinity.
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.iter().any(|v| !v.is_finite()) {
            return Err(VscError::NonFinite("vector entries".into()));
        }
        Ok(Self { data })
    }

    pub fn zeros(n: usize) -> Self {
        Self { data: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.data[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    /// Euclidean norm.
    pub fn norm2(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute entry (0 for the empty vector).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.data
    }
}

/// Gram matrix `X^T X`. The result is exactly symmetric: the lower triangle
/// is produced by mirroring the upper triangle rather than recomputing it.
pub fn gram(x: &Matrix) -> Result<Matrix> {
    let c = x.cols;
    let mut g = Matrix::zeros(c, c);
    for row in x.data.chunks_exact(c.max(1)) {
        for a in 0..c {
            let xa = row[a];
            for (b, &xb) in row.iter().enumerate().skip(a) {
                g.data[a * c + b] += xa * xb;
            }
        }
    }
    for a in 0..c {
        for b in 0..a {
            g.data[a * c + b] = g.data[b * c + a];
        }
    }
    Ok(g)
}

/// Relative symmetry tolerance accepted by [`spd_solve`].
const SYMMETRY_TOL: f64 = 1e-10;

/// Solves `A x = b` for symmetric positive definite `A` via Cholesky
/// factorization. Rejects non-square or asymmetric inputs, and reports
/// [`VscError::Singular`] when a pivot is not strictly positive.
pub fn spd_solve(a: &Matrix, b: &Vector) -> Result<Vector> {
    let n = a.rows;
    if a.cols != n {
        return Err(VscError::Shape(format!(
            "spd_solve: matrix is {}x{}, expected square",
            a.rows, a.cols
        )));
    }
    if b.len() != n {
        return Err(VscError::Shape(format!(
            "spd_solve: matrix is {n}x{n} but right-hand side has length {}",
            b.len()
        )));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (u, l) = (a.data[i * n + j], a.data[j * n + i]);
            if (u - l).abs() > SYMMETRY_TOL * (1.0 + u.abs().max(l.abs())) {
                return Err(VscError::Shape(format!(
                    "spd_solve: matrix is not symmetric at ({i},{j})"
                )));
            }
        }
    }

    // Lower-triangular Cholesky factor, stored dense.
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut diag = a.data[j * n + j];
        for k in 0..j {
            diag -= l[j * n + k] * l[j * n + k];
        }
        // `diag <= 0.0` alone would let NaN through; the finiteness check
        // closes that hole.
        if diag <= 0.0 || !diag.is_finite() {
            return Err(VscError::Singular);
        }
        let d = diag.sqrt();
        l[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a.data[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }

    // Forward substitution: L z = b.
    let mut z = vec![0.0; n];
    for i in 0..n {
        let mut s = b.get(i);
        for k in 0..i {
            s -= l[i * n + k] * z[k];
        }
        z[i] = s / l[i * n + i];
    }
    // Back substitution: L^T x = z.
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = z[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Vector::new(x)
}

/// Relative residual bound enforced by [`ridge_solve`].
pub const RIDGE_RESIDUAL_TOL: f64 = 1e-8;

/// Ridge regression weights `w = (X^T X + lambda I)^{-1} X^T y`.
///
/// `lambda` must be finite and non-negative. After solving, the residual
/// `max|((X^T X + lambda I) w - X^T y)|` is checked against
/// `RIDGE_RESIDUAL_TOL * (1 + max|X^T y|)`; a violation is reported as
/// [`VscError::Numerical`] instead of returning an inaccurate solution.
pub fn ridge_solve(x: &Matrix, y: &Vector, lambda: f64) -> Result<Vector> {
    if x.rows != y.len() {
        return Err(VscError::Shape(format!(
            "ridge_solve: {} rows vs target of length {}",
            x.rows,
            y.len()
        )));
    }
    if x.cols == 0 {
        return Err(VscError::Shape("ridge_solve: matrix has no columns".into()));
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(VscError::Parameter(format!(
            "ridge_solve: lambda must be finite and non-negative, got {lambda}"
        )));
    }

    let mut a = gram(x)?;
    for j in 0..a.cols {
        let v = a.get(j, j) + lambda;
        a.set(j, j, v);
    }
    let rhs = x.transpose_matvec(y)?;
    let w = spd_solve(&a, &rhs)?;

    let reproduced = a.matvec(&w)?;
    let mut resid = 0.0f64;
    for (r, t) in reproduced.iter().zip(rhs.iter()) {
        resid = resid.max((r - t).abs());
    }
    if resid > RIDGE_RESIDUAL_TOL * (1.0 + rhs.max_abs()) {
        return Err(VscError::Numerical(format!(
            "ridge solve residual {resid:.3e} exceeds bound"
        )));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: solve the ridge normal equations by Gaussian
    /// elimination with partial pivoting, accumulating the normal matrix
    /// in a different (column-major) order from `gram`.
    #[allow(clippy::needless_range_loop)] // index form mirrors the math
    fn ridge_oracle(x: &Matrix, y: &Vector, lambda: f64) -> Vec<f64> {
        let (r, c) = (x.rows(), x.cols());
        let mut a = vec![vec![0.0f64; c + 1]; c];
        for i in 0..c {
            for j in 0..c {
                let mut s = 0.0;
                for k in 0..r {
                    s += x.get(k, i) * x.get(k, j);
                }
                a[i][j] = s + if i == j { lambda } else { 0.0 };
            }
            let mut s = 0.0;
            for k in 0..r {
                s += x.get(k, i) * y.get(k);
            }
            a[i][c] = s;
        }
        for col in 0..c {
            let pivot = (col..c)
                .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
                .unwrap();
            a.swap(col, pivot);
            for row in (col + 1)..c {
                let f = a[row][col] / a[col][col];
                for j in col..=c {
                    let sub = f * a[col][j];
                    a[row][j] -= sub;
                }
            }
        }
        let mut w = vec![0.0; c];
        for i in (0..c).rev() {
            let mut s = a[i][c];
            for j in (i + 1)..c {
                s -= a[i][j] * w[j];
            }
            w[i] = s / a[i][i];
        }
        w
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
        let data: Vec<f64> = (0..rows * cols).map(|_| rng.random_range(-2.0..2.0)).collect();
        Matrix::new(rows, cols, data).unwrap()
    }

    #[test]
    fn gram_of_small_matrix() {
        let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let g = gram(&x).unwrap();
        assert_eq!(g.data(), &[10.0, 14.0, 14.0, 20.0]);
    }

    #[test]
    fn gram_is_bitwise_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_matrix(&mut rng, 17, 6);
        let g = gram(&x).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(g.get(i, j).to_bits(), g.get(j, i).to_bits());
            }
        }
    }

    #[test]
    fn spd_solve_two_by_two() {
        let a = Matrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let b = Vector::new(vec![2.0, 1.0]).unwrap();
        let x = spd_solve(&a, &b).unwrap();
        assert!((x.get(0) - 0.5).abs() < 1e-12);
        assert!(x.get(1).abs() < 1e-12);
    }

    #[test]
    fn spd_solve_rejects_asymmetry_and_indefiniteness() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        let b = Vector::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(spd_solve(&a, &b), Err(VscError::Shape(_))));

        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(spd_solve(&a, &b), Err(VscError::Singular)));

        let zero = Matrix::zeros(2, 2);
        assert!(matches!(spd_solve(&zero, &b), Err(VscError::Singular)));
    }

    #[test]
    fn ridge_identity_design() {
        let x = Matrix::identity(2);
        let y = Vector::new(vec![1.0, -1.0]).unwrap();
        let w = ridge_solve(&x, &y, 1.0).unwrap();
        assert!((w.get(0) - 0.5).abs() < 1e-15);
        assert!((w.get(1) + 0.5).abs() < 1e-15);

        let w = ridge_solve(&x, &y, 0.0).unwrap();
        assert!((w.get(0) - 1.0).abs() < 1e-15);
        assert!((w.get(1) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn ridge_rejects_bad_lambda_and_shapes() {
        let x = Matrix::identity(2);
        let y = Vector::new(vec![1.0, -1.0]).unwrap();
        assert!(matches!(
            ridge_solve(&x, &y, -1.0),
            Err(VscError::Parameter(_))
        ));
        assert!(matches!(
            ridge_solve(&x, &y, f64::NAN),
            Err(VscError::Parameter(_))
        ));
        let y3 = Vector::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(ridge_solve(&x, &y3, 1.0), Err(VscError::Shape(_))));
    }

    #[test]
    fn ridge_matches_elimination_oracle_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for case in 0..100 {
            let rows = rng.random_range(1..=32);
            let cols = rng.random_range(1..=8);
            let lambda = [0.1, 1.0, 10.0][case % 3];
            let x = random_matrix(&mut rng, rows, cols);
            let y_data: Vec<f64> = (0..rows).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y = Vector::new(y_data).unwrap();
            let w = ridge_solve(&x, &y, lambda).unwrap();
            let expect = ridge_oracle(&x, &y, lambda);
            for (a, b) in w.iter().zip(&expect) {
                assert!(
                    (a - b).abs() <= 1e-8,
                    "case {case}: {a} vs {b} (rows={rows}, cols={cols}, lambda={lambda})"
                );
            }
        }
    }

    #[test]
    fn ridge_norm_shrinks_as_lambda_grows() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let rows = rng.random_range(4..=24);
            let cols = rng.random_range(1..=6);
            let x = random_matrix(&mut rng, rows, cols);
            let y_data: Vec<f64> = (0..rows).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y = Vector::new(y_data).unwrap();
            let mut prev = f64::INFINITY;
            for lambda in [0.01, 0.1, 1.0, 10.0, 100.0] {
                let norm = ridge_solve(&x, &y, lambda).unwrap().norm2();
                assert!(norm <= prev + 1e-10, "norm grew: {norm} > {prev}");
                prev = norm;
            }
        }
    }

    proptest! {
        #[test]
        fn ridge_agrees_with_oracle(
            seed in 0u64..1000,
            rows in 1usize..=32,
            cols in 1usize..=8,
            lambda_idx in 0usize..3,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lambda = [0.1, 1.0, 10.0][lambda_idx];
            let x = random_matrix(&mut rng, rows, cols);
            let y_data: Vec<f64> = (0..rows).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y = Vector::new(y_data).unwrap();
            let w = ridge_solve(&x, &y, lambda).unwrap();
            let expect = ridge_oracle(&x, &y, lambda);
            for (a, b) in w.iter().zip(&expect) {
                prop_assert!((a - b).abs() <= 1e-8);
            }
        }

        #[test]
        fn matrix_rejects_non_finite(i in 0usize..4) {
            let mut data = vec![0.0; 4];
            data[i] = f64::NAN;
            prop_assert!(Matrix::new(2, 2, data).is_err());
        }
    }
}
