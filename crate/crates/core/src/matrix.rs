//! Dense matrices over an exact field and the elimination kernels behind
//! every homology computation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::{Entry, Scalar, Q};
use crate::error::{Error, Result};

/// Row-major dense matrix. Matrices act on column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<S> {
    pub matrix: Matrix<S>,
    pub pivots: Vec<usize>,
}

/// Output of [`rank_nullity`].
#[derive(Clone, Debug)]
pub struct RankNullity<S> {
    pub rank: usize,
    /// Columns span the kernel (`cols x nullity`).
    pub kernel_basis: Matrix<S>,
    /// Columns span the image (`rows x rank`), chosen among the original
    /// columns.
    pub image_basis: Matrix<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix of the given shape from integer rows. An empty row
    /// list is accepted for any shape with zero rows or zero columns.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        Matrix {
            rows,
            cols,
            data: entries.iter().map(|&v| S::from_i64(v)).collect(),
        }
    }

    /// Parses a JSON-style nested entry list against an expected shape.
    /// Empty shapes accept `[]` or a list of empty rows.
    pub fn from_entries(rows: usize, cols: usize, entries: &[Vec<Entry>]) -> Result<Self> {
        if rows * cols == 0 {
            if entries.iter().all(|r| r.is_empty()) && (entries.is_empty() || entries.len() == rows)
            {
                return Ok(Self::zeros(rows, cols));
            }
            return Err(Error::Shape(format!("expected an empty {rows}x{cols} matrix")));
        }
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape(format!(
                "expected a {rows}x{cols} matrix, found {} rows",
                entries.len()
            )));
        }
        let data = entries
            .iter()
            .flatten()
            .map(S::from_entry)
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows, cols, data })
    }

    pub fn to_entries(&self) -> Vec<Vec<Entry>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(S::to_entry).collect())
            .collect()
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix<S>) -> Matrix<S> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix<S> {
        self.scale(&S::one().neg())
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(s)).collect(),
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix<S>) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix<S> {
        let mut out = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out[(r, c)] = self[(r0 + r, c0 + c)].clone();
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, other);
        out
    }

    /// Columns of `self` selected by index.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix<S> {
        let mut out = Self::zeros(self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                out[(r, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref<S> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(sel) = (prow..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(prow, sel);
            let inv = m[(prow, col)].inv();
            for c in col..m.cols {
                let v = m[(prow, c)].mul(&inv);
                m[(prow, c)] = v;
            }
            for r in 0..m.rows {
                if r == prow || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let pv = &m.data[prow * m.cols + c];
                    if pv.is_zero() {
                        continue;
                    }
                    let v = m[(r, c)].sub(&factor.mul(pv));
                    m[(r, c)] = v;
                }
            }
            pivots.push(col);
            prow += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        S::rank(self)
    }

    /// Columns span the null space.
    pub fn kernel(&self) -> Matrix<S> {
        let Rref { matrix, pivots } = self.rref();
        kernel_from_rref(&matrix, &pivots, self.cols)
    }
}

fn kernel_from_rref<S: Scalar>(r: &Matrix<S>, pivots: &[usize], cols: usize) -> Matrix<S> {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut k = Matrix::zeros(cols, free.len());
    for (j, &f) in free.iter().enumerate() {
        k[(f, j)] = S::one();
        for (i, &p) in pivots.iter().enumerate() {
            k[(p, j)] = r[(i, f)].neg();
        }
    }
    k
}

/// Rank, kernel basis and image basis of `m`.
pub fn rank_nullity<S: Scalar>(m: &Matrix<S>) -> RankNullity<S> {
    let Rref { matrix, pivots } = m.rref();
    RankNullity {
        rank: pivots.len(),
        kernel_basis: kernel_from_rref(&matrix, &pivots, m.cols),
        image_basis: m.select_columns(&pivots),
    }
}

/// Fraction-free (Bareiss) rank over the rationals: rows are scaled to
/// primitive integer vectors, then eliminated with exact division.
pub fn bareiss_rank(m: &Matrix<Q>) -> usize {
    let rows = m.rows();
    let cols = m.cols();
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| {
            let row = m.row(r);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(&q.denom()));
            row.iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect()
        })
        .collect();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(sel) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, sel);
        let pivot = a[rank][col].clone();
        for r in (rank + 1)..rows {
            let factor = a[r][col].clone();
            for c in col..cols {
                let v = (&pivot * &a[r][c] - &factor * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
        }
        prev = pivot.abs();
        rank += 1;
    }
    rank
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn integer_determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(sel) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if sel != k {
            a.swap(sel, k);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
