use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{abs_cmp_key, div_floor, IntMatrix};

/// `U·A·V = D` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Nonzero diagonal entries `d₁ | d₂ | … | d_r`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k)
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form with transforms.
///
/// Pivoting always picks the entry of least absolute value in the remaining
/// block, so the transforms are deterministic for a given input.
pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -div_floor(&d[(i, t)], &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -div_floor(&d[(t, j)], &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                // a remainder smaller than the pivot survived; promote it
                let best_row = (t + 1..rows)
                    .filter(|&i| !d[(i, t)].is_zero())
                    .min_by_key(|&i| abs_cmp_key(&d[(i, t)]));
                let best_col = (t + 1..cols)
                    .filter(|&j| !d[(t, j)].is_zero())
                    .min_by_key(|&j| abs_cmp_key(&d[(t, j)]));
                match (best_row, best_col) {
                    (Some(i), Some(j)) if d[(t, j)].abs() < d[(i, t)].abs() => {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                    }
                    (Some(i), _) => {
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                    }
                    (None, Some(j)) => {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                    }
                    (None, None) => unreachable!("unclean pivot without remainders"),
                }
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfDecomposition { u, d, v }
}

fn min_abs_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Invariant-factor decomposition of `ℤ^rows / column-span(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CokernelInvariants {
    pub free_rank: usize,
    /// Invariant factors greater than 1, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl CokernelInvariants {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

pub fn cokernel_invariants(a: &IntMatrix) -> CokernelInvariants {
    let factors = smith_normal_form(a).invariant_factors();
    CokernelInvariants {
        free_rank: a.rows() - factors.len(),
        torsion: factors.into_iter().filter(|x| !x.is_one()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    fn check(a: &IntMatrix) -> SnfDecomposition {
        let snf = smith_normal_form(a);
        assert_eq!(&(&snf.u * a) * &snf.v, snf.d);
        assert!(snf.u.is_unimodular());
        assert!(snf.v.is_unimodular());
        snf
    }

    #[test]
    fn identity() {
        let snf = check(&IntMatrix::identity(3));
        assert_eq!(snf.u, IntMatrix::identity(3));
        assert_eq!(snf.v, IntMatrix::identity(3));
        assert_eq!(snf.d, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two() {
        let snf = check(&IntMatrix::from_rows_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(snf.d, IntMatrix::from_rows_i64(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn already_diagonal_with_zero() {
        let snf = check(&IntMatrix::from_rows_i64(&[&[1, 0], &[0, 0]]));
        assert_eq!(snf.d, IntMatrix::from_rows_i64(&[&[1, 0], &[0, 0]]));
        assert_eq!(snf.invariant_factors(), int_vec(&[1]));
    }

    #[test]
    fn divisibility_fixup() {
        // diag(2, 3) is not in Smith form; the fix-up pass must produce diag(1, 6)
        let snf = check(&IntMatrix::from_rows_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(snf.invariant_factors(), int_vec(&[1, 6]));
    }

    #[test]
    fn empty_shapes() {
        let snf = check(&IntMatrix::zeros(3, 0));
        assert!(snf.invariant_factors().is_empty());
        let snf = check(&IntMatrix::zeros(0, 2));
        assert!(snf.invariant_factors().is_empty());
    }

    #[test]
    fn cokernels() {
        assert!(cokernel_invariants(&IntMatrix::identity(4)).is_trivial());
        let c = cokernel_invariants(&IntMatrix::from_rows_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(
            c,
            CokernelInvariants {
                free_rank: 0,
                torsion: int_vec(&[6])
            }
        );
        let fig = IntMatrix::from_columns_i64(3, &[&[1, 0, 0], &[-1, 1, 0], &[1, -2, 0], &[0, 1, 0]]);
        assert_eq!(
            cokernel_invariants(&fig),
            CokernelInvariants {
                free_rank: 1,
                torsion: vec![]
            }
        );
    }
}
