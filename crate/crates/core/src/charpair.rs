//! Hyper characteristic pairs `(P, ξ)`: a simple polytope's combinatorics with
//! one integer vector per facet, subject to the basis condition at vertices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::complexes::{validate_complex, ComplexViolation, SimpleCombinatorics};
use crate::geometry::HPolytope;
use crate::linalg::{
    cokernel_invariants, extend_to_basis, is_primitive, kernel_basis, saturation, smith_normal_form,
    CokernelInvariants, IntMatrix, IntVector, Lattice,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("characteristic matrix has {found} columns but the polytope has {expected} facets")]
    ColumnCount { expected: usize, found: usize },
    #[error("torus rank {torus_rank} is smaller than the polytope dimension {dim}")]
    TorusRankTooSmall { torus_rank: usize, dim: usize },
}

/// The pair `(P, ξ)`; column `j` of `xi` is the vector assigned to facet `j`.
///
/// Facet order is significant. Two pairs compare equal only when they agree
/// entry-wise; equivalence up to relabeling is decided in [`crate::rigidity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperCharPair {
    combinatorics: SimpleCombinatorics,
    xi: IntMatrix,
    geometric_origin: Option<HPolytope>,
}

impl HyperCharPair {
    /// Checks shapes only. Condition (★) and primitivity are reported by
    /// [`validate_pair`] so that invalid input can still be inspected.
    pub fn new(combinatorics: SimpleCombinatorics, xi: IntMatrix) -> Result<Self, PairError> {
        if xi.cols() != combinatorics.facet_count() {
            return Err(PairError::ColumnCount {
                expected: combinatorics.facet_count(),
                found: xi.cols(),
            });
        }
        if xi.rows() < combinatorics.dim() {
            return Err(PairError::TorusRankTooSmall {
                torus_rank: xi.rows(),
                dim: combinatorics.dim(),
            });
        }
        Ok(HyperCharPair {
            combinatorics,
            xi,
            geometric_origin: None,
        })
    }

    pub fn with_geometry(mut self, polytope: HPolytope) -> Self {
        self.geometric_origin = Some(polytope);
        self
    }

    pub fn combinatorics(&self) -> &SimpleCombinatorics {
        &self.combinatorics
    }

    pub fn xi(&self) -> &IntMatrix {
        &self.xi
    }

    pub fn geometric_origin(&self) -> Option<&HPolytope> {
        self.geometric_origin.as_ref()
    }

    /// No polytope realization is attached; only the combinatorial checks back this pair.
    pub fn is_combinatorial_only(&self) -> bool {
        self.geometric_origin.is_none()
    }

    /// `n`
    pub fn dim(&self) -> usize {
        self.combinatorics.dim()
    }

    /// `m`
    pub fn facet_count(&self) -> usize {
        self.combinatorics.facet_count()
    }

    /// `n + k`
    pub fn torus_rank(&self) -> usize {
        self.xi.rows()
    }

    /// `k`
    pub fn k(&self) -> usize {
        self.torus_rank() - self.dim()
    }

    pub fn column(&self, j: usize) -> IntVector {
        self.xi.column(j)
    }

    pub fn vertex_columns(&self, vertex: &[usize]) -> Vec<IntVector> {
        vertex.iter().map(|&j| self.xi.column(j)).collect()
    }

    /// Same pair with facets renamed by `phi` and the vectors transformed:
    /// the new column `phi[j]` is `signs[j] · A · ξ_j`.
    pub fn transformed(&self, phi: &[usize], signs: &[i8], a: &IntMatrix) -> HyperCharPair {
        let comb = self.combinatorics.relabel(phi);
        let mut cols = vec![Vec::new(); self.facet_count()];
        for j in 0..self.facet_count() {
            let mut v = a.mul_vec(&self.column(j));
            if signs[j] < 0 {
                v.iter_mut().for_each(|x| *x = -&*x);
            }
            cols[phi[j]] = v;
        }
        let xi = IntMatrix::from_columns(a.rows(), &cols).expect("uniform column length");
        HyperCharPair::new(comb, xi).expect("shape preserved")
    }
}

/// A failed pair invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairViolation {
    Complex(ComplexViolation),
    NonPrimitiveColumn {
        facet: usize,
    },
    /// The vectors at `vertex` are not part of a ℤ-basis; `invariant_factors`
    /// is the SNF diagonal of the `(n+k) × n` matrix they form.
    BasisCondition {
        vertex: Vec<usize>,
        invariant_factors: Vec<BigInt>,
    },
}

impl fmt::Display for PairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairViolation::Complex(c) => write!(f, "{c}"),
            PairViolation::NonPrimitiveColumn { facet } => write!(f, "vector of facet {facet} is not primitive"),
            PairViolation::BasisCondition {
                vertex,
                invariant_factors,
            } => {
                let fs: Vec<String> = invariant_factors.iter().map(ToString::to_string).collect();
                write!(f, "vertex {vertex:?}: invariant factors ({})", fs.join(","))
            }
        }
    }
}

/// Checks the complex, primitivity of every vector, and the basis condition at every vertex.
pub fn validate_pair(p: &HyperCharPair) -> Vec<PairViolation> {
    let complex = validate_complex(p.combinatorics());
    let structural = complex.iter().any(|c| {
        matches!(
            c,
            ComplexViolation::TooManyFacets { .. }
                | ComplexViolation::NoVertices
                | ComplexViolation::FacetIndexOutOfRange { .. }
                | ComplexViolation::WrongVertexSize { .. }
        )
    });
    let mut out: Vec<PairViolation> = complex.into_iter().map(PairViolation::Complex).collect();
    if structural {
        return out;
    }
    for j in 0..p.facet_count() {
        if !is_primitive(&p.column(j)) {
            out.push(PairViolation::NonPrimitiveColumn { facet: j });
        }
    }
    for v in p.combinatorics().vertices() {
        let m = p.xi().select_columns(v);
        let snf = smith_normal_form(&m);
        let diag: Vec<BigInt> = (0..v.len()).map(|i| snf.d[(i, i)].clone()).collect();
        if !diag.iter().all(One::is_one) {
            out.push(PairViolation::BasisCondition {
                vertex: v.clone(),
                invariant_factors: diag,
            });
        }
    }
    out
}

pub fn is_valid(p: &HyperCharPair) -> bool {
    validate_pair(p).is_empty()
}

/// Rank of `ξ` over ℚ.
pub fn rank_of(p: &HyperCharPair) -> usize {
    p.xi().rank()
}

/// Whether the image of `ξ` is a direct summand of `ℤ^{n+k}`.
pub fn is_direct_summand_image(p: &HyperCharPair) -> bool {
    saturation(p.xi()) == Lattice::column_span(p.xi())
}

/// Finitely generated abelian group `ℤ^free_rank ⊕ ⊕ ℤ/t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }
}

impl From<CokernelInvariants> for AbelianGroup {
    fn from(c: CokernelInvariants) -> Self {
        AbelianGroup {
            free_rank: c.free_rank,
            torsion: c.torsion,
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// The group `ℤ^{n+k} / ⟨ξ₁, …, ξ_m⟩`.
///
/// The fundamental group of the manifold is a quotient of this group; the
/// two are not claimed to be equal.
pub fn pi1_quotient_bound(p: &HyperCharPair) -> AbelianGroup {
    cokernel_invariants(p.xi()).into()
}

/// Result of splitting off the torus factor that acts trivially on the image of `ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResult {
    /// Same combinatorics, torus rank equal to `rank ξ`.
    pub reduced: HyperCharPair,
    /// Rank of the split-off torus.
    pub torus_factor: usize,
    /// `C ∈ GL(n+k, ℤ)` with `C·ξ_j = (ξ̃_j, 0)` for every facet `j`.
    pub change_of_basis: IntMatrix,
    /// Torsion of `saturation(ξ) / image(ξ)`; empty iff the image is a direct summand.
    pub image_torsion: Vec<BigInt>,
}

/// Rewrites `ξ` in a basis adapted to its saturation `M(ξ)` and drops the
/// complementary coordinates, which vanish on every column.
///
/// The complement is taken from an SNF completion and is not canonical; the
/// change of basis is returned so the result can be reproduced and checked.
pub fn split(p: &HyperCharPair) -> SplitResult {
    let rank = rank_of(p);
    let t = p.torus_rank();
    let change_of_basis = if rank == t {
        IntMatrix::identity(t)
    } else {
        let sat = saturation(p.xi());
        let basis = extend_to_basis(t, sat.basis()).expect("saturated lattice bases extend");
        IntMatrix::from_columns(t, &basis)
            .expect("basis vectors have ambient length")
            .inverse_unimodular()
            .expect("completed basis is unimodular")
    };
    let moved = &change_of_basis * p.xi();
    debug_assert!((rank..t).all(|i| moved.row(i).iter().all(num_traits::Zero::is_zero)));
    let reduced_xi = moved.top_rows(rank);
    let image_torsion = cokernel_invariants(&reduced_xi).torsion;
    let mut reduced = HyperCharPair::new(p.combinatorics().clone(), reduced_xi)
        .expect("rank of a valid pair is at least its dimension");
    reduced.geometric_origin = p.geometric_origin.clone();
    SplitResult {
        reduced,
        torus_factor: t - rank,
        change_of_basis,
        image_torsion,
    }
}

/// Inverse of [`split`] up to weak equivalence: pads every vector with `t` zeros.
pub fn product_with_torus(p: &HyperCharPair, t: usize) -> HyperCharPair {
    let mut out =
        HyperCharPair::new(p.combinatorics().clone(), p.xi().pad_rows(t)).expect("padding keeps shapes consistent");
    out.geometric_origin = p.geometric_origin.clone();
    out
}

/// The pair with `ξ = I_m`, whose space is the moment-angle manifold of `P`.
pub fn moment_angle_pair(k: &SimpleCombinatorics) -> HyperCharPair {
    HyperCharPair::new(k.clone(), IntMatrix::identity(k.facet_count()))
        .expect("a valid complex has at least as many facets as its dimension")
}

/// Kernel of `ξ: ℤ^m → ℤ^{n+k}` and where it fails to meet coordinate sublattices trivially.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSubtorus {
    pub kernel: Lattice,
    /// Vertices `σ` at which `ker ξ ∩ ℤ^σ ≠ 0`.
    pub freeness_failures: Vec<Vec<usize>>,
}

impl KernelSubtorus {
    pub fn is_free(&self) -> bool {
        self.freeness_failures.is_empty()
    }
}

pub fn kernel_subtorus(p: &HyperCharPair) -> KernelSubtorus {
    let kernel = kernel_basis(p.xi());
    let m = p.facet_count();
    let freeness_failures = p
        .combinatorics()
        .vertices()
        .iter()
        .filter(|v| {
            let mut gens: Vec<IntVector> = kernel.basis().to_vec();
            gens.extend(v.iter().map(|&j| {
                let mut e = vec![BigInt::from(0); m];
                e[j] = BigInt::one();
                e
            }));
            let rank = IntMatrix::from_columns(m, &gens).expect("length m").rank();
            rank != kernel.rank() + v.len()
        })
        .cloned()
        .collect();
    KernelSubtorus {
        kernel,
        freeness_failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::linalg::int_vec;

    #[test]
    fn cut_square_validates_for_parameter_grid() {
        for a in -2..=2 {
            for d in -2..=2 {
                let p = corpus::cut_square(a, 1 - a, d, a * d);
                assert!(validate_pair(&p).is_empty());
            }
        }
    }

    #[test]
    fn bad_square_reports_vertex() {
        let p = corpus::bad_square();
        let v = validate_pair(&p);
        assert!(v.contains(&PairViolation::NonPrimitiveColumn { facet: 1 }));
        assert!(v.contains(&PairViolation::BasisCondition {
            vertex: vec![0, 1],
            invariant_factors: int_vec(&[1, 2]),
        }));
        assert!(v.contains(&PairViolation::BasisCondition {
            vertex: vec![1, 2],
            invariant_factors: int_vec(&[1, 2]),
        }));
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn moment_angle_pairs() {
        let p = moment_angle_pair(&SimpleCombinatorics::polygon(4));
        assert_eq!((p.dim(), p.k()), (2, 2));
        assert_eq!(p.xi(), &IntMatrix::identity(4));
        assert!(is_valid(&p));
        assert_eq!(moment_angle_pair(&SimpleCombinatorics::simplex(2)).k(), 1);
        assert_eq!(moment_angle_pair(&SimpleCombinatorics::polygon(5)).k(), 3);
        assert!(pi1_quotient_bound(&p).is_trivial());
        assert_eq!(kernel_subtorus(&p).kernel.rank(), 0);
    }

    #[test]
    fn rank_and_summand() {
        let fig = corpus::cut_square(0, 0, 0, 0);
        assert_eq!(rank_of(&fig), 2);
        assert!(is_direct_summand_image(&fig));

        let seg = corpus::segment(&[&[1, 0], &[1, 2]]);
        assert_eq!(rank_of(&seg), 2);
        // full rank, but the image has index 2 in ℤ²
        assert!(!is_direct_summand_image(&seg));
        assert_eq!(
            pi1_quotient_bound(&seg),
            AbelianGroup {
                free_rank: 0,
                torsion: int_vec(&[2])
            }
        );

        let seg3 = corpus::segment(&[&[1, 0, 0], &[1, 2, 0]]);
        assert_eq!(rank_of(&seg3), 2);
        assert!(!is_direct_summand_image(&seg3));
        assert!(is_valid(&seg3));
    }

    #[test]
    fn pi1_examples() {
        assert!(pi1_quotient_bound(&corpus::cp(2)).is_trivial());
        let g = pi1_quotient_bound(&corpus::cut_square(0, 0, 0, 0));
        assert_eq!(
            g,
            AbelianGroup {
                free_rank: 1,
                torsion: vec![]
            }
        );
        assert_eq!(g.to_string(), "Z");
    }

    #[test]
    fn split_cut_square() {
        let s = split(&corpus::cut_square(0, 0, 0, 0));
        assert_eq!(s.torus_factor, 1);
        assert_eq!(
            s.reduced.xi(),
            &IntMatrix::from_columns_i64(2, &[&[1, 0], &[-1, 1], &[1, -2], &[0, 1]])
        );
        assert!(is_valid(&s.reduced));
        assert!(s.image_torsion.is_empty());
        let moved = &s.change_of_basis * corpus::cut_square(0, 0, 0, 0).xi();
        assert_eq!(moved, s.reduced.xi().pad_rows(1));
    }

    #[test]
    fn split_full_rank_is_identity() {
        for p in [corpus::cp(2), moment_angle_pair(&SimpleCombinatorics::polygon(4))] {
            let s = split(&p);
            assert_eq!(s.reduced, p);
            assert_eq!(s.torus_factor, 0);
            assert_eq!(s.change_of_basis, IntMatrix::identity(p.torus_rank()));
        }
    }

    #[test]
    fn split_keeps_torsion_of_non_summand_image() {
        let s = split(&corpus::segment(&[&[1, 0, 0], &[1, 2, 0]]));
        assert_eq!(s.torus_factor, 1);
        assert_eq!(s.image_torsion, int_vec(&[2]));
        assert!(is_valid(&s.reduced));
    }

    #[test]
    fn product_padding() {
        let p = corpus::cp(2);
        assert_eq!(product_with_torus(&p, 0), p);
        let q = product_with_torus(&p, 2);
        assert_eq!(q.torus_rank(), 4);
        assert_eq!(q.k(), 2);
        assert!(q.xi().row(2).iter().chain(q.xi().row(3)).all(|x| x == &BigInt::from(0)));
    }

    #[test]
    fn kernel_subtorus_examples() {
        let ks = kernel_subtorus(&corpus::cp(2));
        assert_eq!(ks.kernel, Lattice::from_generators(3, &[int_vec(&[1, 1, 1])]).unwrap());
        assert!(ks.is_free());

        let ks = kernel_subtorus(&corpus::cut_square(0, 0, 0, 0));
        assert_eq!(ks.kernel.rank(), 2);
        assert!(ks.kernel.contains(&int_vec(&[1, 1, 0, -1])));
        assert!(ks.kernel.contains(&int_vec(&[-1, 0, 1, 2])));
        assert!(ks.is_free());
    }

    #[test]
    fn shape_errors() {
        let k = SimpleCombinatorics::polygon(4);
        assert_eq!(
            HyperCharPair::new(k.clone(), IntMatrix::identity(3)),
            Err(PairError::ColumnCount { expected: 4, found: 3 })
        );
        assert_eq!(
            HyperCharPair::new(k, IntMatrix::zeros(1, 4)),
            Err(PairError::TorusRankTooSmall { torus_rank: 1, dim: 2 })
        );
    }
}
