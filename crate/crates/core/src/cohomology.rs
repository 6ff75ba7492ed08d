//! Equivariant cohomology of a pair as a Stanley–Reisner presentation together
//! with its `H*(BT)`-algebra structure, and restrictions to vertices in degree 2.
//!
//! Degree-2 classes are integer combinations of the generators `τ₁, …, τ_m`,
//! stored as coefficient vectors of length `m`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::charpair::{is_direct_summand_image, rank_of, split, HyperCharPair};
use crate::complexes::minimal_non_faces;
use crate::linalg::{dot, extend_to_basis, IntMatrix, IntVector, Lattice, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0:?} is not a vertex of the polytope")]
    NotAVertex(Vec<usize>),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Data recorded when `ξ` is not onto a direct summand of full rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedTorus {
    /// Rank of the torus factor split off.
    pub torus_factor: usize,
    /// Structure map of the reduced torus `T_ξ`, columns `ξ̃_j`.
    pub reduced_map: IntMatrix,
    /// Torsion of the reduced image; empty iff the image was a direct summand.
    pub image_torsion: Vec<BigInt>,
}

/// `ℤ[τ₁, …, τ_m] / (τ_S : S a minimal non-face)` with the algebra map
/// `u ↦ Σ_j ⟨ξ_j, u⟩ τ_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrPresentation {
    pub m: usize,
    /// Square-free monomial relations, as facet index sets.
    pub relations: Vec<Vec<usize>>,
    /// `(n+k) × m`; column `j` is `ξ_j`.
    pub algebra_map_matrix: IntMatrix,
    /// Present when `ξ` is not surjective; the ring is then the one of the
    /// reduced pair, acted on through the projection to `T_ξ`.
    pub reduced: Option<ReducedTorus>,
}

impl SrPresentation {
    /// Image of `u ∈ (ℤ^{n+k})*` in degree 2.
    pub fn structure_map(&self, u: &[BigInt]) -> Result<IntVector, CohomologyError> {
        let t = self.algebra_map_matrix.rows();
        if u.len() != t {
            return Err(CohomologyError::DimensionMismatch {
                expected: t,
                found: u.len(),
            });
        }
        Ok((0..self.m)
            .map(|j| dot(&self.algebra_map_matrix.column(j), u))
            .collect())
    }

    /// Whether the monomial with this support vanishes in the ring.
    pub fn kills_support(&self, support: &[usize]) -> bool {
        self.relations.iter().any(|r| r.iter().all(|j| support.contains(j)))
    }
}

pub fn sr_presentation(p: &HyperCharPair) -> SrPresentation {
    let surjective = rank_of(p) == p.torus_rank() && is_direct_summand_image(p);
    let reduced = (!surjective).then(|| {
        let s = split(p);
        ReducedTorus {
            torus_factor: s.torus_factor,
            reduced_map: s.reduced.xi().clone(),
            image_torsion: s.image_torsion,
        }
    });
    SrPresentation {
        m: p.facet_count(),
        relations: minimal_non_faces(p.combinatorics()),
        algebra_map_matrix: p.xi().clone(),
        reduced,
    }
}

/// `u ↦ Σ_j ⟨ξ_j, u⟩ τ_j`.
pub fn algebra_map(p: &HyperCharPair, u: &[BigInt]) -> Result<IntVector, CohomologyError> {
    if u.len() != p.torus_rank() {
        return Err(CohomologyError::DimensionMismatch {
            expected: p.torus_rank(),
            found: u.len(),
        });
    }
    Ok(p.xi().transpose().mul_vec(u))
}

/// Reads the characteristic vectors back off the algebra map: entry `(s, j)` is
/// the coefficient of `τ_j` in the image of the dual basis vector `e_s*`.
pub fn recover_characteristic(sr: &SrPresentation) -> IntMatrix {
    let t = sr.algebra_map_matrix.rows();
    let mut out = IntMatrix::zeros(t, sr.m);
    for s in 0..t {
        let mut e = vec![BigInt::zero(); t];
        e[s] = BigInt::one();
        let image = sr.structure_map(&e).expect("dual basis vector has torus length");
        for (j, c) in image.into_iter().enumerate() {
            out[(s, j)] = c;
        }
    }
    out
}

/// Dual representatives at one vertex and the annihilator of its vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexRestriction {
    pub vertex: Vec<usize>,
    /// `x_{i_s}` with `⟨ξ_{i_r}, x_{i_s}⟩ = δ_rs`, reduced modulo the annihilator.
    pub representatives: Vec<IntVector>,
    pub annihilator: Lattice,
}

impl VertexRestriction {
    /// Canonical representative of the class of `u` in `(ℤ^{n+k})* / Ann`.
    pub fn quotient_class(&self, u: &[BigInt]) -> IntVector {
        self.annihilator.reduce(u)
    }

    /// Restriction of a degree-2 class: generators off the vertex vanish and
    /// `τ_{i_s}` goes to the class of `x_{i_s}`.
    pub fn restrict(&self, class: &[BigInt]) -> IntVector {
        let t = self.annihilator.ambient_dim();
        let mut acc = vec![BigInt::zero(); t];
        for (s, &j) in self.vertex.iter().enumerate() {
            let c = &class[j];
            if c.is_zero() {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(&self.representatives[s]) {
                *a += c * x;
            }
        }
        self.quotient_class(&acc)
    }
}

/// Completes the vertex vectors to a basis of `ℤ^{n+k}` and dualizes.
///
/// Representatives are only defined up to the annihilator; the returned ones
/// are reduced against its Hermite basis, which makes them independent of the
/// completion chosen.
pub fn dual_representatives(p: &HyperCharPair, vertex: &[usize]) -> Result<VertexRestriction, CohomologyError> {
    let mut sorted = vertex.to_vec();
    sorted.sort_unstable();
    if !p.combinatorics().vertices().contains(&sorted) {
        return Err(CohomologyError::NotAVertex(vertex.to_vec()));
    }
    let t = p.torus_rank();
    let n = vertex.len();
    let basis = extend_to_basis(t, &p.vertex_columns(vertex))?;
    let dual = IntMatrix::from_columns(t, &basis)?.inverse_unimodular()?;
    let annihilator = Lattice::from_generators(t, &(n..t).map(|s| dual.row(s).to_vec()).collect::<Vec<_>>())?;
    let representatives = (0..n).map(|s| annihilator.reduce(dual.row(s))).collect();
    Ok(VertexRestriction {
        vertex: vertex.to_vec(),
        representatives,
        annihilator,
    })
}

pub fn restrict_degree2(p: &HyperCharPair, vertex: &[usize], class: &[BigInt]) -> Result<IntVector, CohomologyError> {
    if class.len() != p.facet_count() {
        return Err(CohomologyError::DimensionMismatch {
            expected: p.facet_count(),
            found: class.len(),
        });
    }
    Ok(dual_representatives(p, vertex)?.restrict(class))
}

/// Ranks of the graded pieces in degrees `0, 2, …, 2⌊max_degree/2⌋`: the
/// number of monomials of each degree whose support is a face.
pub fn hilbert_coefficients(p: &HyperCharPair, max_degree: usize) -> Vec<BigUint> {
    let faces = p.combinatorics().faces();
    let mut by_size = vec![0u64; p.dim() + 1];
    for f in faces {
        by_size[f.len()] += 1;
    }
    (0..=max_degree / 2)
        .map(|d| {
            if d == 0 {
                return BigUint::one();
            }
            // a monomial of degree d with support of size s: C(d-1, s-1) exponent patterns
            (1..by_size.len().min(d + 1))
                .map(|s| BigUint::from(by_size[s]) * num_integer::binomial(BigUint::from(d - 1), BigUint::from(s - 1)))
                .sum()
        })
        .collect()
}
