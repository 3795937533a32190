//! Dense rectangular matrices over a [`Ring`], with exact elimination over a
//! [`Field`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::{Field, Ring, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    Mismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("matrix is singular")]
    Singular,
}

#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = R::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self, ShapeError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(ShapeError::Mismatch {
                    expected: (n, cols),
                    got: (n, row.len()),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn row(&self, r: usize) -> &[R] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<R> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), ShapeError> {
        if self.shape() != other.shape() {
            return Err(ShapeError::Mismatch {
                expected: self.shape(),
                got: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ShapeError> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ShapeError> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn scale(&self, s: &R) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| s.mul(a)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Ring::neg).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, ShapeError> {
        if self.cols != other.rows {
            return Err(ShapeError::Mismatch {
                expected: (self.cols, other.cols),
                got: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c].add_product(a, &other[(k, c)]);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[R]) -> Result<Vec<R>, ShapeError> {
        if v.len() != self.cols {
            return Err(ShapeError::Mismatch {
                expected: (self.cols, 1),
                got: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = R::zero();
                for (a, x) in self.row(r).iter().zip(v) {
                    acc.add_product(a, x);
                }
                acc
            })
            .collect())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<S>(&self, f: impl FnMut(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Nonzero entries as (row, col, value), 0-based, row-major order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &R)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }
}

impl Matrix<Scalar> {
    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }
}

impl<F: Field> Matrix<F> {
    /// Solves `self · x = rhs` exactly. Free variables are set to zero; `None`
    /// if the system is inconsistent.
    pub fn solve(&self, rhs: &[F]) -> Result<Option<Vec<F>>, ShapeError> {
        if rhs.len() != self.rows {
            return Err(ShapeError::Mismatch {
                expected: (self.rows, 1),
                got: (rhs.len(), 1),
            });
        }
        let (rows, cols) = self.shape();
        let mut aug: Vec<Vec<F>> = (0..rows)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.push(rhs[r].clone());
                row
            })
            .collect();
        let pivots = rref(&mut aug, cols);
        // a pivot in the augmented column means 0 = nonzero
        if pivots.last().is_some_and(|&(_, c)| c == cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); cols];
        for &(r, c) in &pivots {
            x[c] = aug[r][cols].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Self, ShapeError> {
        let n = self.rows;
        if n != self.cols {
            return Err(ShapeError::Mismatch {
                expected: (n, n),
                got: self.shape(),
            });
        }
        let mut aug: Vec<Vec<F>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { F::one() } else { F::zero() }));
                row
            })
            .collect();
        let pivots = rref(&mut aug, n);
        if pivots.len() < n || pivots.iter().any(|&(_, c)| c >= n) {
            return Err(ShapeError::Singular);
        }
        Ok(Matrix::from_fn(n, n, |r, c| aug[r][n + c].clone()))
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<F>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        rref(&mut rows, self.cols).len()
    }
}

/// Reduced row echelon form in place, pivoting only on the first
/// `pivot_cols` columns plus (for consistency detection) the next one.
/// Returns (row, col) of each pivot.
fn rref<F: Field>(m: &mut [Vec<F>], pivot_cols: usize) -> Vec<(usize, usize)> {
    let rows = m.len();
    let width = m.first().map_or(0, Vec::len);
    let last = (pivot_cols + 1).min(width);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..last {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for v in m[r].iter_mut() {
            *v = v.mul(&inv);
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.sub(&factor.mul(pv));
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    pivots
}

impl<R> std::ops::Index<(usize, usize)> for Matrix<R> {
    type Output = R;

    fn index(&self, (r, c): (usize, usize)) -> &R {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        &self.data[r * self.cols + c]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut R {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        &mut self.data[r * self.cols + c]
    }
}

impl<R: fmt::Display> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.data[r * self.cols + c].to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct RectJson {
    m: usize,
    n: usize,
    entries: Vec<(usize, usize, Scalar)>,
}

/// `{"m": rows, "n": cols, "entries": [[i, j, "<scalar>"], ...]}`, nonzero
/// entries only, 1-based.
impl Serialize for Matrix<Scalar> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RectJson {
            m: self.rows,
            n: self.cols,
            entries: self
                .nonzero_entries()
                .map(|(i, j, v)| (i + 1, j + 1, v.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix<Scalar> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RectJson::deserialize(d)?;
        if raw.m == 0 || raw.n == 0 {
            return Err(D::Error::custom("matrix shape must be positive"));
        }
        let mut out = Matrix::zeros(raw.m, raw.n);
        for (i, j, v) in raw.entries {
            if !(1..=raw.m).contains(&i) || !(1..=raw.n).contains(&j) {
                return Err(D::Error::custom(format!(
                    "entry ({i}, {j}) is out of range"
                )));
            }
            out[(i - 1, j - 1)] = v;
        }
        Ok(out)
    }
}
