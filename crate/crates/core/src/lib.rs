//! Exact computations for hyper characteristic pairs `(P, ξ)` of locally
//! standard torus manifolds.

pub mod charpair;
pub mod cohomology;
pub mod complexes;
pub mod corpus;
pub mod geometry;
pub mod linalg;
pub mod rigidity;
