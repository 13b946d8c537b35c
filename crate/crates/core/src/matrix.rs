//! Dense row-major matrices over any [`Scalar`], with Gaussian-elimination
//! kernels (rank, nullspace, solve, inverse). Over the rationals these are
//! exact; over complex doubles the same routines serve as partially pivoted
//! LU for solving and inversion, while rank decisions go through the
//! SVD-style kernels in [`crate::eigen`].

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Convenience constructor from integer entries.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    acc = acc + self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    /// Flattens row-major; the vectorization used for span computations.
    pub fn vectorize(&self) -> Vec<S> {
        self.data.clone()
    }

    /// Row echelon reduction in place; returns pivot columns. Pivots are
    /// chosen by largest magnitude within the column (exact fields only use
    /// this for ranking, correctness never depends on it).
    fn echelonize(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let mut best: Option<(usize, f64)> = None;
            for r in row..self.rows {
                let e = &self[(r, col)];
                if !e.is_zero() {
                    let mag = e.magnitude();
                    if best.is_none_or(|(_, m)| mag > m) {
                        best = Some((r, mag));
                    }
                }
            }
            let Some((prow, _)) = best else { continue };
            self.swap_rows(row, prow);
            let inv = S::one() / self[(row, col)].clone();
            for j in col..self.cols {
                self[(row, j)] = self[(row, j)].clone() * inv.clone();
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for j in col..self.cols {
                        let t = factor.clone() * self[(row, j)].clone();
                        self[(r, j)] = self[(r, j)].clone() - t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank via elimination; exact over the rationals.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelonize().len()
    }

    /// Basis of the right kernel; empty iff full column rank.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.echelonize();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![S::zero(); self.cols];
            vec[free] = S::one();
            for (r, &c) in pivots.iter().enumerate() {
                vec[c] = S::zero() - m[(r, free)].clone();
            }
            basis.push(vec);
        }
        basis
    }

    /// Solves `self * x = b`; `Err(SingularSystem)` when inconsistent,
    /// under-determined systems return one solution (free vars set to 0).
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: {} rows vs rhs length {}",
                self.rows,
                b.len()
            )));
        }
        let mut aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.echelonize();
        if pivots.contains(&self.cols) {
            return Err(Error::SingularSystem);
        }
        let mut x = vec![S::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, self.cols)].clone();
        }
        Ok(x)
    }

    /// Inverse of a square matrix, or `Err(SingularSystem)`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let pivots = aug.echelonize();
        if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
            return Err(Error::SingularSystem);
        }
        Ok(Matrix::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    /// Max absolute column sum (1-norm).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].magnitude()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// True when the matrix is c·I for some scalar c.
    pub fn is_scalar_multiple_of_identity(&self) -> bool {
        if !self.is_square() || self.rows == 0 {
            return self.is_square();
        }
        let c = self[(0, 0)].clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expect = if i == j { c.clone() } else { S::zero() };
                if self[(i, j)] != expect {
                    return false;
                }
            }
        }
        true
    }
}

impl<S: Scalar> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S: Scalar> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact rank over the rationals.
pub fn rank_exact(m: &Matrix<crate::scalar::Rational>) -> usize {
    m.rank()
}

/// Exact right-kernel basis over the rationals.
pub fn nullspace_exact(m: &Matrix<crate::scalar::Rational>) -> Vec<Vec<crate::scalar::Rational>> {
    m.nullspace()
}

/// Incremental exact span tracker over vectors in S^n. Feeding a vector
/// either extends the basis or yields the coordinates of the vector in
/// terms of the previously accepted ones.
pub struct SpanTracker<S: Scalar> {
    dim: usize,
    /// Echelonized rows, each paired with its pivot column and the
    /// combination of accepted inputs it represents.
    rows: Vec<(usize, Vec<S>, Vec<S>)>,
    accepted: usize,
}

pub enum SpanOutcome<S> {
    /// Vector was independent; now part of the span.
    Independent,
    /// Vector = sum of coeff[k] * accepted_input[k].
    Dependent(Vec<S>),
}

impl<S: Scalar> SpanTracker<S> {
    pub fn new(dim: usize) -> Self {
        SpanTracker { dim, rows: Vec::new(), accepted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.accepted
    }

    pub fn insert(&mut self, v: &[S]) -> SpanOutcome<S> {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        let mut combo = vec![S::zero(); self.accepted];
        for (pivot, row, row_combo) in &self.rows {
            let c = v[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                let t = c.clone() * row[j].clone();
                v[j] = v[j].clone() - t;
            }
            for (k, rc) in row_combo.iter().enumerate() {
                let t = c.clone() * rc.clone();
                combo[k] = combo[k].clone() + t;
            }
        }
        let pivot = match v.iter().position(|e| !e.is_zero()) {
            Some(p) => p,
            None => return SpanOutcome::Dependent(combo),
        };
        let inv = S::one() / v[pivot].clone();
        for e in v.iter_mut() {
            *e = e.clone() * inv.clone();
        }
        // combo currently expresses (input - residual); residual`s own
        // combination column tracks the new input with weight inv.
        let mut row_combo: Vec<S> = combo.iter().map(|c| S::zero() - c.clone() * inv.clone()).collect();
        row_combo.push(inv);
        self.accepted += 1;
        for (_, _, rc) in self.rows.iter_mut() {
            rc.push(S::zero());
        }
        self.rows.push((pivot, v, row_combo));
        SpanOutcome::Independent
    }
}
