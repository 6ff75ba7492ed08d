//! Small named pairs used throughout the tests and the CLI fixtures.

use crate::charpair::{moment_angle_pair, HyperCharPair};
use crate::complexes::SimpleCombinatorics;
use crate::geometry::{HPolytope, LatticePolytopeV};
use crate::linalg::{int_vec, IntMatrix};

fn pair(k: SimpleCombinatorics, dim: usize, cols: &[&[i64]]) -> HyperCharPair {
    HyperCharPair::new(k, IntMatrix::from_columns_i64(dim, cols)).expect("fixture shapes are consistent")
}

/// `ℂPⁿ` over the `n`-simplex: `e₁, …, eₙ, −(e₁ + ⋯ + eₙ)`.
pub fn cp(n: usize) -> HyperCharPair {
    let mut cols: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    cols.push(vec![-1; n]);
    let refs: Vec<&[i64]> = cols.iter().map(Vec::as_slice).collect();
    pair(SimpleCombinatorics::simplex(n), n, &refs)
}

/// Interval with the two given vectors.
pub fn segment(cols: &[&[i64]]) -> HyperCharPair {
    assert_eq!(cols.len(), 2);
    pair(SimpleCombinatorics::simplex(1), cols[0].len(), cols)
}

/// Hirzebruch surface over the square: `(1,0), (0,1), (−1,a), (0,−1)`.
pub fn hirzebruch(a: i64) -> HyperCharPair {
    pair(
        SimpleCombinatorics::polygon(4),
        2,
        &[&[1, 0], &[0, 1], &[-1, a], &[0, -1]],
    )
}

/// Square pair with vectors `(1,0,a), (−1,1,b), (1,−2,c), (0,1,d)` in cyclic facet order.
pub fn cut_square(a: i64, b: i64, c: i64, d: i64) -> HyperCharPair {
    let k = SimpleCombinatorics::new(
        2,
        ["x=0", "y=0", "x=1", "y=1"].map(String::from).to_vec(),
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
    );
    pair(k, 3, &[&[1, 0, a], &[-1, 1, b], &[1, -2, c], &[0, 1, d]])
}

/// Unit cube `[0,1]³` with facets ordered `x=0, x=1, y=0, y=1, z=0, z=1`.
pub fn unit_cube() -> HPolytope {
    HPolytope::unit_cube(3)
}

/// Quasitoric vectors on [`unit_cube`] whose cut at `z = 1/2` is [`cut_square`].
pub fn cube_xi(a: i64, b: i64, c: i64, d: i64) -> IntMatrix {
    IntMatrix::from_columns_i64(
        3,
        &[&[1, 0, a], &[1, -2, c], &[-1, 1, b], &[0, 1, d], &[0, 0, 1], &[0, 0, 1]],
    )
}

/// Square with a doubled second vector; fails the basis condition at the two vertices on facet 1.
pub fn bad_square() -> HyperCharPair {
    pair(
        SimpleCombinatorics::polygon(4),
        2,
        &[&[1, 0], &[0, 2], &[-1, 0], &[0, -1]],
    )
}

pub fn moment_angle_polygon(m: usize) -> HyperCharPair {
    moment_angle_pair(&SimpleCombinatorics::polygon(m))
}

/// The square `(±1, ±1, 1)` at height one; facets `x=1, x=−1, y=1, y=−1`.
pub fn contact_square() -> LatticePolytopeV {
    LatticePolytopeV::new(
        vec![
            int_vec(&[1, 1, 1]),
            int_vec(&[-1, 1, 1]),
            int_vec(&[-1, -1, 1]),
            int_vec(&[1, -1, 1]),
        ],
        vec![vec![0, 3], vec![1, 2], vec![0, 1], vec![2, 3]],
        ["x=1", "x=-1", "y=1", "y=-1"].map(String::from).to_vec(),
    )
}

/// Triangle `conv{(1,0,1), (0,1,1), (0,0,1)}` at height one.
pub fn contact_triangle() -> LatticePolytopeV {
    LatticePolytopeV::new(
        vec![int_vec(&[1, 0, 1]), int_vec(&[0, 1, 1]), int_vec(&[0, 0, 1])],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        ["x+y=1", "x=0", "y=0"].map(String::from).to_vec(),
    )
}
