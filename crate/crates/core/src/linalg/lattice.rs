use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{div_floor, smith_normal_form, IntMatrix, IntVector, LinalgError};

/// A sublattice of `ℤ^d`, stored by a basis in Hermite normal form.
///
/// The basis vectors are the nonzero rows of the row-style HNF of any
/// generating set: echelon shape, positive pivots, entries above each pivot
/// reduced into `[0, pivot)`. Two lattices are equal iff their bases are
/// entry-wise equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_dim: usize,
    basis: Vec<IntVector>,
}

impl Lattice {
    pub fn zero(ambient_dim: usize) -> Self {
        Lattice {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| unit(ambient_dim, i)).collect();
        Lattice { ambient_dim, basis }
    }

    /// Lattice generated by arbitrary (possibly dependent) vectors.
    pub fn from_generators(ambient_dim: usize, gens: &[IntVector]) -> Result<Self, LinalgError> {
        if let Some(g) = gens.iter().find(|g| g.len() != ambient_dim) {
            return Err(LinalgError::DimensionMismatch {
                expected: ambient_dim,
                found: g.len(),
            });
        }
        Ok(Lattice {
            ambient_dim,
            basis: hermite_rows(gens.to_vec(), ambient_dim),
        })
    }

    /// Lattice generated by the columns of `m`.
    pub fn column_span(m: &IntMatrix) -> Self {
        Lattice {
            ambient_dim: m.rows(),
            basis: hermite_rows(m.columns(), m.rows()),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors as the columns of an `ambient_dim × rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient_dim, &self.basis).expect("basis vectors have ambient length")
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(
            v.len(),
            self.ambient_dim,
            "vector length differs from lattice ambient dimension"
        );
        let mut out = v.to_vec();
        for b in &self.basis {
            let p = pivot(b).expect("HNF basis rows are nonzero");
            let q = div_floor(&out[p], &b[p]);
            if !q.is_zero() {
                for (o, x) in out.iter_mut().zip(b) {
                    *o -= &q * x;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.ambient_dim && self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Index `[self : sub]` when `sub ⊆ self` have equal rank.
    pub fn index_of(&self, sub: &Lattice) -> Option<BigInt> {
        if sub.rank() != self.rank() || !self.contains_lattice(sub) {
            return None;
        }
        // coordinates of sub's basis in self's basis form a square matrix
        let own = self.basis_matrix();
        let coords: Vec<IntVector> = sub
            .basis
            .iter()
            .map(|v| {
                let sol = super::solve_rational(
                    &own,
                    &v.iter()
                        .map(|x| num_rational::BigRational::from_integer(x.clone()))
                        .collect::<Vec<_>>(),
                )
                .ok()
                .flatten()
                .expect("sublattice vector lies in span");
                sol.particular.iter().map(|x| x.to_integer()).collect()
            })
            .collect();
        let m = IntMatrix::from_columns(self.rank(), &coords).ok()?;
        Some(m.determinant().abs())
    }
}

fn unit(d: usize, i: usize) -> IntVector {
    let mut v = vec![BigInt::zero(); d];
    v[i] = BigInt::one();
    v
}

fn pivot(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// Row-style Hermite normal form of the given vectors; zero rows dropped.
fn hermite_rows(mut rows: Vec<IntVector>, dim: usize) -> Vec<IntVector> {
    let mut r = 0;
    for c in 0..dim {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by_key(|&i| rows[i][c].abs());
            let Some(best) = best else { break };
            rows.swap(r, best);
            let mut rest_zero = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = div_floor(&rows[i][c], &rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                rest_zero &= rows[i][c].is_zero();
            }
            if rest_zero {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().take(r) {
            let q = div_floor(&row[c], &pivot_row[c]);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// `{x ∈ ℤ^cols : A·x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> Lattice {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let gens: Vec<IntVector> = (r..a.cols()).map(|j| snf.v.column(j)).collect();
    Lattice {
        ambient_dim: a.cols(),
        basis: hermite_rows(gens, a.cols()),
    }
}

/// Smallest direct summand of `ℤ^rows` containing every column of `A`.
pub fn saturation(a: &IntMatrix) -> Lattice {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let u_inv = snf.u.inverse_unimodular().expect("SNF left transform is unimodular");
    let gens: Vec<IntVector> = (0..r).map(|j| u_inv.column(j)).collect();
    Lattice {
        ambient_dim: a.rows(),
        basis: hermite_rows(gens, a.rows()),
    }
}

fn check_lengths(dim: usize, cols: &[IntVector]) -> Result<(), LinalgError> {
    match cols.iter().find(|c| c.len() != dim) {
        Some(c) => Err(LinalgError::DimensionMismatch {
            expected: dim,
            found: c.len(),
        }),
        None => Ok(()),
    }
}

/// Whether `cols` is part of a ℤ-basis of `ℤ^dim`: linearly independent with
/// every invariant factor equal to 1.
pub fn is_unimodular_extendable(dim: usize, cols: &[IntVector]) -> Result<bool, LinalgError> {
    check_lengths(dim, cols)?;
    if cols.len() > dim {
        return Ok(false);
    }
    let m = IntMatrix::from_columns(dim, cols)?;
    let factors = smith_normal_form(&m).invariant_factors();
    Ok(factors.len() == cols.len() && factors.iter().all(One::is_one))
}

/// Completes `cols` to a ℤ-basis of `ℤ^dim`. The output starts with `cols`;
/// the appended vectors are one valid completion, not a canonical one.
pub fn extend_to_basis(dim: usize, cols: &[IntVector]) -> Result<Vec<IntVector>, LinalgError> {
    if !is_unimodular_extendable(dim, cols)? {
        return Err(LinalgError::NotExtendable);
    }
    let m = IntMatrix::from_columns(dim, cols)?;
    let snf = smith_normal_form(&m);
    // U·M·V = (I | 0)ᵀ, so U⁻¹ = [M·V | W] and [M | W] is unimodular.
    let u_inv = snf.u.inverse_unimodular()?;
    let mut out = cols.to_vec();
    out.extend((cols.len()..dim).map(|j| u_inv.column(j)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    fn cut_square_xi() -> IntMatrix {
        IntMatrix::from_columns_i64(3, &[&[1, 0, 0], &[-1, 1, 0], &[1, -2, 0], &[0, 1, 0]])
    }

    #[test]
    fn hnf_is_canonical() {
        let a = Lattice::from_generators(2, &[int_vec(&[2, 3]), int_vec(&[1, 1])]).unwrap();
        assert_eq!(a, Lattice::full(2));
        let b = Lattice::from_generators(2, &[int_vec(&[4, 2]), int_vec(&[2, 2])]).unwrap();
        let c = Lattice::from_generators(2, &[int_vec(&[2, 0]), int_vec(&[0, 2]), int_vec(&[6, 4])]).unwrap();
        assert_eq!(b, c);
        assert_eq!(b.basis(), &[int_vec(&[2, 0]), int_vec(&[0, 2])]);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_rows_i64(&[&[1, 1]]));
        assert_eq!(k.rank(), 1);
        assert!(k.contains(&int_vec(&[1, -1])));
        assert_eq!(k, Lattice::from_generators(2, &[int_vec(&[1, -1])]).unwrap());

        let k = kernel_basis(&cut_square_xi());
        let expected = Lattice::from_generators(4, &[int_vec(&[1, 1, 0, -1]), int_vec(&[-1, 0, 1, 2])]).unwrap();
        assert_eq!(k, expected);

        assert_eq!(kernel_basis(&IntMatrix::identity(4)).rank(), 0);
    }

    #[test]
    fn saturation_examples() {
        let s = saturation(&IntMatrix::from_columns_i64(2, &[&[2, 0], &[0, 2]]));
        assert_eq!(s, Lattice::full(2));
        let s = saturation(&cut_square_xi());
        assert_eq!(
            s,
            Lattice::from_generators(3, &[int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])]).unwrap()
        );
        let u = IntMatrix::from_rows_i64(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, -1]]);
        assert_eq!(saturation(&u), Lattice::full(3));
    }

    #[test]
    fn extendability_examples() {
        assert!(is_unimodular_extendable(3, &[int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])]).unwrap());
        assert!(!is_unimodular_extendable(2, &[int_vec(&[2, 0]), int_vec(&[0, 1])]).unwrap());
        for (a, d) in [(0, 0), (5, -3), (-7, 11)] {
            assert!(is_unimodular_extendable(3, &[int_vec(&[1, 0, a]), int_vec(&[0, 1, d])]).unwrap());
        }
        assert!(matches!(
            is_unimodular_extendable(3, &[int_vec(&[1, 0])]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn completions() {
        let b = extend_to_basis(2, &[int_vec(&[1, 0])]).unwrap();
        assert_eq!(b[0], int_vec(&[1, 0]));
        assert!(IntMatrix::from_columns(2, &b).unwrap().is_unimodular());

        let b = extend_to_basis(2, &[int_vec(&[2, 3])]).unwrap();
        assert_eq!(b[0], int_vec(&[2, 3]));
        assert!(IntMatrix::from_columns(2, &b).unwrap().is_unimodular());

        let b = extend_to_basis(3, &[int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])]).unwrap();
        assert_eq!(b[2], int_vec(&[0, 0, 1]));

        assert_eq!(extend_to_basis(2, &[int_vec(&[2, 0])]), Err(LinalgError::NotExtendable));
    }

    #[test]
    fn reduction_is_canonical() {
        let l = Lattice::from_generators(3, &[int_vec(&[0, 0, 1])]).unwrap();
        assert_eq!(l.reduce(&int_vec(&[-2, -1, 7])), int_vec(&[-2, -1, 0]));
        let l = Lattice::from_generators(2, &[int_vec(&[2, 0]), int_vec(&[0, 3])]).unwrap();
        assert_eq!(l.reduce(&int_vec(&[5, -1])), int_vec(&[1, 2]));
    }

    #[test]
    fn index_in_saturation() {
        let sub = Lattice::from_generators(3, &[int_vec(&[1, 0, 0]), int_vec(&[1, 2, 0])]).unwrap();
        let sat = saturation(&sub.basis_matrix());
        assert_eq!(sat.index_of(&sub), Some(BigInt::from(2)));
    }
}
