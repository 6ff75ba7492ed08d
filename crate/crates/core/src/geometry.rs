//! Exact rational polytope geometry: vertex enumeration of H-polytopes, the
//! hyperplane cut, and outward normals of lattice cones.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::charpair::{validate_pair, HyperCharPair, PairViolation};
use crate::complexes::{validate_complex, ComplexViolation, SimpleCombinatorics};
use crate::linalg::{dot, kernel_basis, primitive_part, IntMatrix, IntVector, RatMatrix, RatVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polytope is empty")]
    Empty,
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is not simple at vertex {vertex:?}: tight on {tight:?}")]
    NotSimple { vertex: Vec<String>, tight: Vec<usize> },
    #[error("inequality {inequality} is tight at no vertex")]
    RedundantInequality { inequality: usize },
    #[error("cutting hyperplane contains vertex {0:?}")]
    VertexOnHyperplane(Vec<String>),
    #[error("cutting hyperplane misses the polytope")]
    EmptyCut,
    #[error("cutting hyperplane does not meet the interior")]
    CutMissesInterior,
    #[error("polytope of dimension {0} cannot be cut")]
    CutDimension(usize),
    #[error("vertex {0} is the origin")]
    OriginVertex(usize),
    #[error("vertex index {index} out of range in facet {facet}")]
    VertexIndexOutOfRange { facet: usize, index: usize },
    #[error("facet {0} does not span a hyperplane through the origin")]
    FacetNotHyperplanar(usize),
    #[error("normal of facet {facet} pairs to zero with vertex {vertex}")]
    SignAmbiguous { facet: usize, vertex: usize },
    #[error("vertices off facet {0} lie on both sides of it")]
    NotConvex(usize),
    #[error("vertex {vertex} lies on {count} facets instead of {dim}")]
    NotSimpleVertex { vertex: usize, count: usize, dim: usize },
    #[error("facet incidences do not form a valid complex: {0:?}")]
    InvalidCombinatorics(Vec<ComplexViolation>),
    #[error("normal vectors violate the basis condition: {0:?}")]
    StarViolation(Vec<PairViolation>),
}

/// One inequality `a·x ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub a: RatVector,
    pub b: BigRational,
}

impl Inequality {
    pub fn slack(&self, x: &[BigRational]) -> BigRational {
        let lhs: BigRational = self.a.iter().zip(x).map(|(a, x)| a * x).sum();
        &self.b - lhs
    }
}

/// Polytope `{x : aᵢ·x ≤ bᵢ}`; inequality `i` is facet `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    inequalities: Vec<Inequality>,
    facet_labels: Vec<String>,
}

impl HPolytope {
    pub fn new(dim: usize, inequalities: Vec<Inequality>, facet_labels: Vec<String>) -> Result<Self, GeometryError> {
        if let Some(bad) = inequalities.iter().find(|q| q.a.len() != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: bad.a.len(),
            });
        }
        if facet_labels.len() != inequalities.len() {
            return Err(GeometryError::DimensionMismatch {
                expected: inequalities.len(),
                found: facet_labels.len(),
            });
        }
        Ok(HPolytope {
            dim,
            inequalities,
            facet_labels,
        })
    }

    /// `[0,1]^n` with facet `2i` = `{x_i = 0}` and `2i+1` = `{x_i = 1}`.
    pub fn unit_cube(n: usize) -> Self {
        let axis = ["x", "y", "z", "w"];
        let mut ineqs = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let name = axis.get(i).map_or_else(|| format!("x{}", i + 1), |s| s.to_string());
            let mut a = vec![BigRational::zero(); n];
            a[i] = -BigRational::one();
            ineqs.push(Inequality {
                a: a.clone(),
                b: BigRational::zero(),
            });
            labels.push(format!("{name}=0"));
            a[i] = BigRational::one();
            ineqs.push(Inequality {
                a,
                b: BigRational::one(),
            });
            labels.push(format!("{name}=1"));
        }
        HPolytope {
            dim: n,
            inequalities: ineqs,
            facet_labels: labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn facet_labels(&self) -> &[String] {
        &self.facet_labels
    }

    pub fn facet_count(&self) -> usize {
        self.inequalities.len()
    }
}

/// A vertex with the full set of inequalities tight there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeVertex {
    pub point: RatVector,
    pub tight: Vec<usize>,
}

fn fmt_point(p: &[BigRational]) -> Vec<String> {
    p.iter().map(ToString::to_string).collect()
}

/// Unique solution of the square system given by the selected inequalities, if any.
fn solve_tight(h: &HPolytope, subset: &[usize]) -> Option<RatVector> {
    let n = h.dim;
    let rows: Vec<RatVector> = subset
        .iter()
        .map(|&i| {
            let q = &h.inequalities[i];
            let mut r = q.a.clone();
            r.push(q.b.clone());
            r
        })
        .collect();
    let mut m = RatMatrix::from_rows(rows);
    let pivots = m.rref();
    if pivots != (0..n).collect::<Vec<_>>() {
        return None;
    }
    Some((0..n).map(|i| m.get(i, n).clone()).collect())
}

/// Exact vertices of a bounded simple H-polytope, sorted by tight set.
///
/// Every `n`-subset of inequalities is solved; feasible unique solutions are
/// the vertices. Subsets are processed in parallel on the current rayon pool.
pub fn vertex_enumeration(h: &HPolytope) -> Result<Vec<PolytopeVertex>, GeometryError> {
    let n = h.dim;
    if !is_bounded(h) {
        return Err(GeometryError::Unbounded);
    }
    let subsets: Vec<Vec<usize>> = (0..h.facet_count()).combinations(n).collect();
    let points: Vec<RatVector> = subsets
        .par_iter()
        .filter_map(|s| solve_tight(h, s))
        .filter(|x| h.inequalities.iter().all(|q| !q.slack(x).is_negative()))
        .collect();
    let mut found: BTreeMap<RatVector, ()> = BTreeMap::new();
    for p in points {
        found.insert(p, ());
    }
    if found.is_empty() {
        return Err(GeometryError::Empty);
    }
    let mut out = Vec::with_capacity(found.len());
    for point in found.into_keys() {
        let tight: Vec<usize> = (0..h.facet_count())
            .filter(|&i| h.inequalities[i].slack(&point).is_zero())
            .collect();
        if tight.len() != n {
            return Err(GeometryError::NotSimple {
                vertex: fmt_point(&point),
                tight,
            });
        }
        out.push(PolytopeVertex { point, tight });
    }
    if let Some(i) = (0..h.facet_count()).find(|i| out.iter().all(|v| !v.tight.contains(i))) {
        return Err(GeometryError::RedundantInequality { inequality: i });
    }
    out.sort_by(|a, b| a.tight.cmp(&b.tight));
    Ok(out)
}

/// `c·x ≤ r` during elimination.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct HalfSpace {
    coeffs: RatVector,
    rhs: BigRational,
}

/// Fourier–Motzkin feasibility of a system of half-spaces.
fn fm_feasible(mut system: Vec<HalfSpace>, vars: usize) -> bool {
    for v in 0..vars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for h in system {
            let c = h.coeffs[v].clone();
            if c.is_zero() {
                rest.push(h);
                continue;
            }
            // scale so the eliminated coefficient is ±1
            let s = c.abs().recip();
            let scaled = HalfSpace {
                coeffs: h.coeffs.iter().map(|x| x * &s).collect(),
                rhs: &h.rhs * &s,
            };
            if c.is_positive() {
                pos.push(scaled);
            } else {
                neg.push(scaled);
            }
        }
        for p in &pos {
            for q in &neg {
                rest.push(HalfSpace {
                    coeffs: p.coeffs.iter().zip(&q.coeffs).map(|(a, b)| a + b).collect(),
                    rhs: &p.rhs + &q.rhs,
                });
            }
        }
        rest.sort();
        rest.dedup();
        system = rest;
    }
    system.iter().all(|h| !h.rhs.is_negative())
}

/// Bounded iff the recession cone `{x : aᵢ·x ≤ 0}` is `{0}`, i.e. none of the
/// systems `{aᵢ·x ≤ 0, ±x_t ≥ 1}` is feasible.
pub fn is_bounded(h: &HPolytope) -> bool {
    let n = h.dim;
    let cone: Vec<HalfSpace> = h
        .inequalities
        .iter()
        .map(|q| HalfSpace {
            coeffs: q.a.clone(),
            rhs: BigRational::zero(),
        })
        .collect();
    for t in 0..n {
        for sign in [-1i64, 1] {
            let mut sys = cone.clone();
            let mut coeffs = vec![BigRational::zero(); n];
            coeffs[t] = BigRational::from_integer(BigInt::from(-sign));
            sys.push(HalfSpace {
                coeffs,
                rhs: -BigRational::one(),
            });
            if fm_feasible(sys, n) {
                return false;
            }
        }
    }
    true
}

/// Combinatorics of a bounded simple H-polytope: one facet per inequality,
/// vertices given by tight sets.
pub fn combinatorics_of(h: &HPolytope) -> Result<SimpleCombinatorics, GeometryError> {
    let vertices = vertex_enumeration(h)?;
    Ok(SimpleCombinatorics::new(
        h.dim,
        h.facet_labels.clone(),
        vertices.into_iter().map(|v| v.tight).collect(),
    ))
}

/// Cuts `Q` by the hyperplane `c·x = d` and returns the pair over `P = Q ∩ H`.
///
/// Vertices of `P` are the edges of `Q` crossing the hyperplane (two vertices
/// on opposite sides sharing `n − 1` facets); the facets of `P` are the facets
/// of `Q` met by some crossing edge, kept in their original order together
/// with their vectors. The crossing points themselves are never computed.
pub fn hyperplane_cut(
    h: &HPolytope,
    xi: &IntMatrix,
    c: &[BigRational],
    d: &BigRational,
) -> Result<HyperCharPair, GeometryError> {
    let n = h.dim;
    if xi.cols() != h.facet_count() {
        return Err(GeometryError::DimensionMismatch {
            expected: h.facet_count(),
            found: xi.cols(),
        });
    }
    if c.len() != n {
        return Err(GeometryError::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    if n < 2 {
        return Err(GeometryError::CutDimension(n));
    }
    if c.iter().all(Zero::is_zero) {
        return Err(GeometryError::CutMissesInterior);
    }
    let vertices = vertex_enumeration(h)?;
    let mut sides = Vec::with_capacity(vertices.len());
    for v in &vertices {
        let value: BigRational = c.iter().zip(&v.point).map(|(a, x)| a * x).sum::<BigRational>() - d;
        if value.is_zero() {
            return Err(GeometryError::VertexOnHyperplane(fmt_point(&v.point)));
        }
        sides.push(value.is_positive());
    }
    if sides.iter().all(|&s| s) || sides.iter().all(|&s| !s) {
        return Err(GeometryError::EmptyCut);
    }

    let mut cut_vertices: Vec<Vec<usize>> = Vec::new();
    for (i, j) in (0..vertices.len()).tuple_combinations() {
        if sides[i] == sides[j] {
            continue;
        }
        let shared: Vec<usize> = vertices[i]
            .tight
            .iter()
            .copied()
            .filter(|f| vertices[j].tight.contains(f))
            .collect();
        if shared.len() == n - 1 {
            cut_vertices.push(shared);
        }
    }
    let mut surviving: Vec<usize> = cut_vertices.iter().flatten().copied().collect();
    surviving.sort_unstable();
    surviving.dedup();
    let new_index: BTreeMap<usize, usize> = surviving.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let labels = surviving.iter().map(|&f| h.facet_labels[f].clone()).collect();
    let verts = cut_vertices
        .iter()
        .map(|v| v.iter().map(|f| new_index[f]).collect())
        .collect();
    let comb = SimpleCombinatorics::new(n - 1, labels, verts);
    let pair = HyperCharPair::new(comb, xi.select_columns(&surviving)).map_err(|_| GeometryError::CutDimension(n))?;
    Ok(pair)
}

/// Simple lattice polytope in `ℝ^{n+1} ∖ {0}` given by vertices and facet incidences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytopeV {
    pub vertices: Vec<IntVector>,
    /// Each facet as a list of vertex indices.
    pub facets: Vec<Vec<usize>>,
    pub facet_labels: Vec<String>,
}

impl LatticePolytopeV {
    pub fn new(vertices: Vec<IntVector>, facets: Vec<Vec<usize>>, facet_labels: Vec<String>) -> Self {
        LatticePolytopeV {
            vertices,
            facets,
            facet_labels,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices.first().map_or(0, Vec::len)
    }
}

/// Primitive outward normals of the cone facets, oriented so that
/// `⟨u_F, w⟩ < 0` for every vertex `w` off `F`.
pub fn cone_normals(l: &LatticePolytopeV) -> Result<Vec<IntVector>, GeometryError> {
    let d = l.ambient_dim();
    for (i, v) in l.vertices.iter().enumerate() {
        if v.len() != d {
            return Err(GeometryError::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
        if v.iter().all(Zero::is_zero) {
            return Err(GeometryError::OriginVertex(i));
        }
    }
    let mut normals = Vec::with_capacity(l.facets.len());
    for (fi, facet) in l.facets.iter().enumerate() {
        if let Some(&index) = facet.iter().find(|&&v| v >= l.vertices.len()) {
            return Err(GeometryError::VertexIndexOutOfRange { facet: fi, index });
        }
        let rows: Vec<BigInt> = facet.iter().flat_map(|&v| l.vertices[v].clone()).collect();
        let m = IntMatrix::from_entries(facet.len(), d, rows).expect("rows have ambient length");
        let kernel = kernel_basis(&m);
        if kernel.rank() != 1 {
            return Err(GeometryError::FacetNotHyperplanar(fi));
        }
        let mut u = primitive_part(&kernel.basis()[0]);
        let mut sign = 0i8;
        for (vi, w) in l.vertices.iter().enumerate() {
            if facet.contains(&vi) {
                continue;
            }
            let s = dot(&u, w);
            if s.is_zero() {
                return Err(GeometryError::SignAmbiguous { facet: fi, vertex: vi });
            }
            let this = if s.is_positive() { 1 } else { -1 };
            if sign == 0 {
                sign = this;
            } else if sign != this {
                return Err(GeometryError::NotConvex(fi));
            }
        }
        if sign > 0 {
            u.iter_mut().for_each(|x| *x = -&*x);
        }
        normals.push(u);
    }
    Ok(normals)
}

/// The `k = 1` pair of a good contact toric manifold whose moment cone is the
/// cone over `L`.
pub fn good_contact_pair(l: &LatticePolytopeV) -> Result<HyperCharPair, GeometryError> {
    let d = l.ambient_dim();
    let n = d.saturating_sub(1);
    let normals = cone_normals(l)?;
    let mut verts = Vec::with_capacity(l.vertices.len());
    for vi in 0..l.vertices.len() {
        let on: Vec<usize> = (0..l.facets.len()).filter(|&f| l.facets[f].contains(&vi)).collect();
        if on.len() != n {
            return Err(GeometryError::NotSimpleVertex {
                vertex: vi,
                count: on.len(),
                dim: n,
            });
        }
        verts.push(on);
    }
    let labels = if l.facet_labels.len() == l.facets.len() {
        l.facet_labels.clone()
    } else {
        (1..=l.facets.len()).map(|i| format!("F{i}")).collect()
    };
    let comb = SimpleCombinatorics::new(n, labels, verts);
    let complex = validate_complex(&comb);
    if !complex.is_empty() {
        return Err(GeometryError::InvalidCombinatorics(complex));
    }
    let xi = IntMatrix::from_columns(d, &normals).expect("normals have ambient length");
    let pair = HyperCharPair::new(comb, xi).map_err(|_| GeometryError::InvalidCombinatorics(vec![]))?;
    let violations = validate_pair(&pair);
    if !violations.is_empty() {
        return Err(GeometryError::StarViolation(violations));
    }
    Ok(pair)
}
