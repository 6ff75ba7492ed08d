//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers ([`BigInt`]) or
//! reduced rationals ([`BigRational`]); there is no floating point anywhere in
//! the crate. Vectors are plain `Vec`s, matrices are dense and row-major.

mod lattice;
mod matrix;
mod rational;
mod snf;

pub use lattice::{extend_to_basis, is_unimodular_extendable, kernel_basis, saturation, Lattice};
pub use matrix::IntMatrix;
pub use rational::{solve_rational, RatMatrix, RationalSolution};
pub use snf::{cokernel_invariants, smith_normal_form, CokernelInvariants, SnfDecomposition};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Integer vector in `ℤ^d`.
pub type IntVector = Vec<BigInt>;
/// Rational vector in `ℚ^d`; entries are always reduced with positive denominator.
pub type RatVector = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors are not part of a basis of the integer lattice")]
    NotExtendable,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unimodular")]
    NotUnimodular,
}

/// Standard pairing of two integer vectors.
pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gcd of all entries (0 for the zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// A vector is primitive when the gcd of its entries is 1.
pub fn is_primitive(v: &[BigInt]) -> bool {
    content(v) == BigInt::from(1)
}

/// Divides out the content of `v`. The zero vector is returned unchanged.
pub fn primitive_part(v: &[BigInt]) -> IntVector {
    let g = content(v);
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Floor division for big integers.
pub(crate) fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

pub(crate) fn abs_cmp_key(x: &BigInt) -> BigInt {
    x.abs()
}

/// Converts a slice of machine integers to a big-integer vector.
pub fn int_vec(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Builds a rational `p/q`; panics when `q == 0`.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
