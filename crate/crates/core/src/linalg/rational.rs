use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{IntMatrix, LinalgError, RatVector};

/// Dense rational matrix used for elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries: m
                .entries()
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        }
    }

    pub fn from_rows(rows: Vec<RatVector>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let entries: Vec<BigRational> = rows.into_iter().flatten().collect();
        assert_eq!(entries.len(), r * c, "ragged rational matrix");
        RatMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    fn get_mut(&mut self, i: usize, j: usize) -> &mut BigRational {
        &mut self.entries[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                *self.get_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = self.get(r, j) * &f;
                    *self.get_mut(i, j) -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = RatMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.get_mut(i, j) = self.get(i, j).clone();
            }
            *aug.get_mut(i, n + i) = BigRational::one();
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        let mut inv = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                *inv.get_mut(i, j) = aug.get(i, n + j).clone();
            }
        }
        Some(inv)
    }

    /// Integer matrix when every entry is integral.
    pub fn to_int(&self) -> Option<IntMatrix> {
        let entries: Option<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect();
        IntMatrix::from_entries(self.rows, self.cols, entries?).ok()
    }
}

/// One particular solution of `A·x = b` together with a basis of the rational kernel of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSolution {
    pub particular: RatVector,
    pub kernel: Vec<RatVector>,
}

/// Solves `A·x = b` over ℚ. Free variables of the particular solution are set to zero;
/// the kernel basis has one vector per free column. `Ok(None)` means inconsistent.
pub fn solve_rational(a: &IntMatrix, b: &[BigRational]) -> Result<Option<RationalSolution>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let (rows, cols) = (a.rows(), a.cols());
    let mut aug = RatMatrix::zeros(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            *aug.get_mut(i, j) = BigRational::from_integer(a[(i, j)].clone());
        }
        *aug.get_mut(i, cols) = b[i].clone();
    }
    let pivots = aug.rref();
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut particular = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug.get(r, cols).clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -aug.get(r, f).clone();
            }
            v
        })
        .collect();
    Ok(Some(RationalSolution { particular, kernel }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn identity_system() {
        let sol = solve_rational(&IntMatrix::identity(2), &[rat(3, 2), rat(-1, 1)])
            .unwrap()
            .unwrap();
        assert_eq!(sol.particular, vec![rat(3, 2), rat(-1, 1)]);
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn dual_representative_system() {
        let a = IntMatrix::from_rows_i64(&[&[-1, 1, 0], &[1, -2, 0]]);
        let sol = solve_rational(&a, &[rat(1, 1), rat(0, 1)]).unwrap().unwrap();
        assert_eq!(sol.particular, vec![rat(-2, 1), rat(-1, 1), rat(0, 1)]);
        assert_eq!(sol.kernel, vec![vec![rat(0, 1), rat(0, 1), rat(1, 1)]]);
    }

    #[test]
    fn inconsistent_system() {
        let a = IntMatrix::from_rows_i64(&[&[1], &[1]]);
        assert_eq!(solve_rational(&a, &[rat(0, 1), rat(1, 1)]).unwrap(), None);
    }

    #[test]
    fn length_mismatch() {
        let a = IntMatrix::identity(2);
        assert!(matches!(
            solve_rational(&a, &[rat(1, 1)]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }
}
