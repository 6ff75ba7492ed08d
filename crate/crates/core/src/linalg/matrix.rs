use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{IntVector, LinalgError, RatMatrix};

/// Dense arbitrary-precision integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Builds a matrix from machine-integer rows. Panics on ragged input.
    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Builds a `dim × cols.len()` matrix whose columns are `cols`.
    pub fn from_columns(dim: usize, cols: &[IntVector]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: dim,
                    found: col.len(),
                });
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    /// Machine-integer column constructor for tests and fixtures.
    pub fn from_columns_i64(dim: usize, cols: &[&[i64]]) -> Self {
        let cols: Vec<IntVector> = cols.iter().map(|c| super::int_vec(c)).collect();
        Self::from_columns(dim, &cols).expect("column length mismatch")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IntVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Sub-matrix made of the given columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Sub-matrix made of the first `k` rows.
    pub fn top_rows(&self, k: usize) -> IntMatrix {
        IntMatrix {
            rows: k,
            cols: self.cols,
            entries: self.entries[..k * self.cols].to_vec(),
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| super::dot(self.row(i), v)).collect()
    }

    /// Appends `extra` zero rows at the bottom.
    pub fn pad_rows(&self, extra: usize) -> IntMatrix {
        let mut entries = self.entries.clone();
        entries.resize((self.rows + extra) * self.cols, BigInt::zero());
        IntMatrix {
            rows: self.rows + extra,
            cols: self.cols,
            entries,
        }
    }

    /// Block-diagonal sum `self ⊕ I_extra`.
    pub fn direct_sum_identity(&self, extra: usize) -> IntMatrix {
        let n = self.rows + extra;
        let mut m = Self::zeros(n, self.cols + extra);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for t in 0..extra {
            m[(self.rows + t, self.cols + t)] = BigInt::one();
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    /// `|det| = 1`.
    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        RatMatrix::from_int(self).rank()
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotUnimodular);
        }
        let inv = RatMatrix::from_int(self).inverse().ok_or(LinalgError::Singular)?;
        inv.to_int().ok_or(LinalgError::NotUnimodular)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.entries[src * self.cols + j] * factor;
            self.entries[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += factor * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.entries[i * self.cols + src] * factor;
            self.entries[i * self.cols + dst] += v;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.entries[i * self.cols + j];
            self.entries[i * self.cols + j] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect::<Vec<_>>()))
            .finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_rows_i64(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        // 2*(3-2) - 0 + 1*(1-3) = 0
        assert_eq!(m.determinant(), BigInt::from(0));
        let m = IntMatrix::from_rows_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
        let m = IntMatrix::from_rows_i64(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 4]]);
        // expand along row 2: -3 * (2*4 - 1*1) = -21
        assert_eq!(m.determinant(), BigInt::from(-21));
    }

    #[test]
    fn unimodular_inverse() {
        let m = IntMatrix::from_rows_i64(&[&[2, 1], &[3, 2]]);
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(&m * &inv, IntMatrix::identity(2));
        let m = IntMatrix::from_rows_i64(&[&[2, 0], &[0, 1]]);
        assert_eq!(m.inverse_unimodular(), Err(LinalgError::NotUnimodular));
    }
}
