//! Small dense matrices with exact rational entries.

use std::fmt;
use std::ops::Mul;

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios<const C: usize>(rows: &[[(i64, i64); C]]) -> Self {
        let data = rows.iter().flat_map(|row| row.iter().map(|&(n, d)| super::rational::rat(n, d))).collect();
        Self { rows: rows.len(), cols: C, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `u · self` for a row vector `u`.
    pub fn vec_mul(&self, u: &[Rational]) -> Vec<Rational> {
        assert_eq!(u.len(), self.rows, "vector length mismatch");
        (0..self.cols)
            .map(|j| {
                let mut acc = Rational::zero();
                for (i, ui) in u.iter().enumerate() {
                    let m = self.get(i, j);
                    if !ui.is_zero() && !m.is_zero() {
                        acc += ui * m;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, n: u32) -> Matrix {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Product of `matrices[i]` for `i` in `word`, left to right. `dim` is
    /// used for the empty product.
    pub fn product<'a>(dim: usize, factors: impl IntoIterator<Item = &'a Matrix>) -> Matrix {
        factors.into_iter().fold(Matrix::identity(dim), |acc, m| &acc * m)
    }

    /// Rank by Gaussian elimination over `Q`.
    pub fn rank(&self) -> usize {
        let mut m = self.to_rows();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let pivot_row = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && !row[col].is_zero() {
                    let f = &row[col] / &pivot_row[col];
                    for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *x -= &f * p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    assert_eq!(u.len(), v.len(), "vector length mismatch");
    let mut acc = Rational::zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            acc += a * b;
        }
    }
    acc
}

/// True when `u` and `v` (same length, `v ≠ 0`) are proportional, tested by
/// vanishing 2×2 minors.
pub fn proportional(u: &[Rational], v: &[Rational]) -> bool {
    assert_eq!(u.len(), v.len(), "vector length mismatch");
    for i in 0..u.len() {
        for j in (i + 1)..u.len() {
            if &u[i] * &v[j] != &u[j] * &v[i] {
                return false;
            }
        }
    }
    true
}
