//! Combinatorics of simple polytopes, stored as their dual simplicial complexes.
//!
//! A simple `n`-polytope with `m` facets is described by its vertices, each one
//! recorded as the set of `n` facets meeting there. Subsets of facets are
//! handled as 64-bit masks, so at most 64 facets are supported.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use itertools::Itertools;

/// Largest facet count representable by [`FacetSet`].
pub const MAX_FACETS: usize = 64;

/// A set of facet indices as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetSet(pub u64);

impl FacetSet {
    pub fn from_indices(idx: &[usize]) -> Self {
        FacetSet(idx.iter().fold(0u64, |acc, &i| acc | (1u64 << i)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: FacetSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    /// Image under a facet relabeling.
    pub fn map(self, phi: &[usize]) -> FacetSet {
        FacetSet(self.indices().into_iter().fold(0u64, |acc, i| acc | (1u64 << phi[i])))
    }
}

/// Dual simplicial complex of a simple `n`-polytope with `m` facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleCombinatorics {
    dim: usize,
    facet_labels: Vec<String>,
    vertices: Vec<Vec<usize>>,
}

/// One failed invariant of a [`SimpleCombinatorics`], with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexViolation {
    TooManyFacets { m: usize },
    NoVertices,
    FacetIndexOutOfRange { vertex: usize, facet: usize },
    RepeatedFacet { vertex: usize, facet: usize },
    WrongVertexSize { vertex: usize, size: usize },
    DuplicateVertex { first: usize, second: usize },
    UnusedFacet { facet: usize },
    RidgeNotShared { ridge: Vec<usize>, count: usize },
    Disconnected { components: usize },
}

impl fmt::Display for ComplexViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ComplexViolation::*;
        match self {
            TooManyFacets { m } => write!(f, "{m} facets exceeds the supported maximum of {MAX_FACETS}"),
            NoVertices => write!(f, "no vertices"),
            FacetIndexOutOfRange { vertex, facet } => {
                write!(f, "vertex {vertex} uses facet index {facet} out of range")
            }
            RepeatedFacet { vertex, facet } => write!(f, "vertex {vertex} lists facet {facet} twice"),
            WrongVertexSize { vertex, size } => {
                write!(f, "vertex {vertex} meets {size} facets instead of the dimension")
            }
            DuplicateVertex { first, second } => write!(f, "vertices {first} and {second} coincide"),
            UnusedFacet { facet } => write!(f, "facet {facet} contains no vertex"),
            RidgeNotShared { ridge, count } => write!(f, "ridge {ridge:?} lies in {count} vertices instead of 2"),
            Disconnected { components } => write!(f, "ridge graph has {components} components"),
        }
    }
}

impl SimpleCombinatorics {
    /// Stores the data as given (each vertex sorted). Nothing is validated here;
    /// call [`validate_complex`].
    pub fn new(dim: usize, facet_labels: Vec<String>, vertices: Vec<Vec<usize>>) -> Self {
        let vertices = vertices
            .into_iter()
            .map(|mut v| {
                v.sort_unstable();
                v
            })
            .collect();
        SimpleCombinatorics {
            dim,
            facet_labels,
            vertices,
        }
    }

    /// Labels `F1, …, Fm`.
    pub fn with_default_labels(dim: usize, m: usize, vertices: Vec<Vec<usize>>) -> Self {
        Self::new(dim, default_labels(m), vertices)
    }

    /// Cyclic `m`-gon: vertex `{i, i+1 mod m}`.
    pub fn polygon(m: usize) -> Self {
        let vertices = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
        Self::with_default_labels(2, m, vertices)
    }

    /// The `n`-simplex: `n + 1` facets, every `n`-subset is a vertex.
    pub fn simplex(n: usize) -> Self {
        let vertices = (0..=n).combinations(n).collect();
        Self::with_default_labels(n, n + 1, vertices)
    }

    /// The `n`-cube `[0,1]^n`; facet `2i` is `x_i = 0` and facet `2i + 1` is `x_i = 1`.
    pub fn cube(n: usize) -> Self {
        let vertices = (0..1usize << n)
            .map(|bits| (0..n).map(|i| 2 * i + (bits >> i & 1)).collect())
            .collect();
        Self::with_default_labels(n, 2 * n, vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facet_count(&self) -> usize {
        self.facet_labels.len()
    }

    pub fn facet_labels(&self) -> &[String] {
        &self.facet_labels
    }

    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    pub fn vertex_sets(&self) -> Vec<FacetSet> {
        self.vertices.iter().map(|v| FacetSet::from_indices(v)).collect()
    }

    /// Whether `s` lies in some vertex, i.e. the facets in `s` have a common point.
    pub fn is_face(&self, s: FacetSet) -> bool {
        self.vertices.iter().any(|v| s.is_subset_of(FacetSet::from_indices(v)))
    }

    /// All faces of the dual complex, including the empty face.
    pub fn faces(&self) -> HashSet<FacetSet> {
        let mut out = HashSet::new();
        for v in self.vertex_sets() {
            // enumerate submasks of v
            let mut sub = v.0;
            loop {
                out.insert(FacetSet(sub));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & v.0;
            }
        }
        out
    }

    /// Number of vertices containing each facet.
    pub fn facet_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.facet_count()];
        for v in &self.vertices {
            for &i in v {
                deg[i] += 1;
            }
        }
        deg
    }

    /// Facet adjacency in the dual complex (facets sharing a codimension-2 face), as masks.
    pub fn adjacency(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.facet_count()];
        for v in &self.vertices {
            for (&i, &j) in v.iter().tuple_combinations() {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
        adj
    }

    /// The same complex with facets renamed by `phi` (facet `j` becomes `phi[j]`).
    pub fn relabel(&self, phi: &[usize]) -> SimpleCombinatorics {
        let mut labels = self.facet_labels.clone();
        for (j, &t) in phi.iter().enumerate() {
            labels[t] = self.facet_labels[j].clone();
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|&j| phi[j]).collect())
            .collect();
        SimpleCombinatorics::new(self.dim, labels, vertices)
    }
}

fn default_labels(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("F{i}")).collect()
}

/// Runs every structural check; an empty list means the complex is valid.
///
/// The checks are necessary for the complex to come from a simple polytope
/// but not sufficient: polytopality is never certified.
pub fn validate_complex(k: &SimpleCombinatorics) -> Vec<ComplexViolation> {
    use ComplexViolation::*;
    let m = k.facet_count();
    let n = k.dim();
    if m > MAX_FACETS {
        return vec![TooManyFacets { m }];
    }
    if k.vertices.is_empty() {
        return vec![NoVertices];
    }
    let mut out = Vec::new();
    for (vi, v) in k.vertices.iter().enumerate() {
        if let Some(&f) = v.iter().find(|&&f| f >= m) {
            out.push(FacetIndexOutOfRange { vertex: vi, facet: f });
        }
        if let Some((&f, _)) = v.iter().tuple_windows().find(|(a, b)| a == b) {
            out.push(RepeatedFacet { vertex: vi, facet: f });
        }
        if v.len() != n {
            out.push(WrongVertexSize {
                vertex: vi,
                size: v.len(),
            });
        }
    }
    if !out.is_empty() {
        return out;
    }

    let mut seen: HashMap<&[usize], usize> = HashMap::new();
    for (vi, v) in k.vertices.iter().enumerate() {
        if let Some(&first) = seen.get(v.as_slice()) {
            out.push(DuplicateVertex { first, second: vi });
        } else {
            seen.insert(v, vi);
        }
    }

    let degrees = k.facet_degrees();
    out.extend(
        degrees
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(facet, _)| UnusedFacet { facet }),
    );

    let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
    for v in seen.keys() {
        for ridge in v.iter().copied().combinations(n.saturating_sub(1)) {
            *ridges.entry(ridge).or_default() += 1;
        }
    }
    let mut bad: Vec<_> = ridges.into_iter().filter(|&(_, c)| c != 2).collect();
    bad.sort();
    out.extend(bad.into_iter().map(|(ridge, count)| RidgeNotShared { ridge, count }));

    let components = ridge_graph_components(k);
    if components > 1 {
        out.push(Disconnected { components });
    }
    out
}

fn ridge_graph_components(k: &SimpleCombinatorics) -> usize {
    let sets = k.vertex_sets();
    let n = k.dim();
    let mut comp = vec![usize::MAX; sets.len()];
    let mut count = 0;
    for start in 0..sets.len() {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for b in 0..sets.len() {
                if comp[b] == usize::MAX && FacetSet(sets[a].0 & sets[b].0).len() + 1 == n {
                    comp[b] = count;
                    queue.push_back(b);
                }
            }
        }
        count += 1;
    }
    count
}

/// Inclusion-minimal facet subsets with empty intersection, sorted lexicographically.
///
/// For the dual of a simple `n`-polytope every minimal non-face has at most
/// `n + 1` elements, so only subsets up to that size are scanned.
pub fn minimal_non_faces(k: &SimpleCombinatorics) -> Vec<Vec<usize>> {
    let m = k.facet_count();
    let faces = k.faces();
    let mut out = Vec::new();
    for size in 1..=(k.dim() + 1).min(m) {
        for s in (0..m).combinations(size) {
            let mask = FacetSet::from_indices(&s);
            if faces.contains(&mask) {
                continue;
            }
            let minimal = s
                .iter()
                .all(|&drop| faces.contains(&FacetSet(mask.0 & !(1u64 << drop))));
            if minimal {
                out.push(s);
            }
        }
    }
    out.sort();
    out
}

/// `(f₋₁, f₀, …, f_{n−1})`: `f_i` counts faces with `i + 1` facets.
pub fn f_vector(k: &SimpleCombinatorics) -> Vec<u64> {
    let mut f = vec![0u64; k.dim() + 1];
    for face in k.faces() {
        if face.len() <= k.dim() {
            f[face.len()] += 1;
        }
    }
    f
}

/// Lazily enumerates every facet bijection carrying the vertex family of one
/// complex onto the other.
///
/// Facets of the source are assigned in index order and target candidates are
/// tried in increasing order, so bijections come out in lexicographic order.
/// Candidates are pruned by a degree/neighbour-degree fingerprint and by
/// preservation of facet adjacency.
pub struct Isomorphisms {
    m: usize,
    src_fp: Vec<(usize, Vec<usize>)>,
    dst_fp: Vec<(usize, Vec<usize>)>,
    src_adj: Vec<u64>,
    dst_adj: Vec<u64>,
    src_vertices: Vec<FacetSet>,
    dst_vertices: HashSet<FacetSet>,
    phi: Vec<usize>,
    used: u64,
    next: Vec<usize>,
    depth: usize,
    done: bool,
}

fn fingerprints(k: &SimpleCombinatorics, adj: &[u64]) -> Vec<(usize, Vec<usize>)> {
    let deg = k.facet_degrees();
    (0..k.facet_count())
        .map(|i| {
            let mut nb: Vec<usize> = (0..k.facet_count())
                .filter(|&j| adj[i] >> j & 1 == 1)
                .map(|j| deg[j])
                .collect();
            nb.sort_unstable();
            (deg[i], nb)
        })
        .collect()
}

impl Isomorphisms {
    fn new(src: &SimpleCombinatorics, dst: &SimpleCombinatorics) -> Self {
        let m = src.facet_count();
        let src_adj = src.adjacency();
        let dst_adj = dst.adjacency();
        let dst_vertices: HashSet<FacetSet> = dst.vertex_sets().into_iter().collect();
        let src_vertices = src.vertex_sets();
        let comparable = m == dst.facet_count()
            && m <= MAX_FACETS
            && src.dim() == dst.dim()
            && src.vertices().len() == dst.vertices().len()
            && src_vertices.iter().collect::<BTreeSet<_>>().len() == dst_vertices.len();
        let src_fp = fingerprints(src, &src_adj);
        let dst_fp = fingerprints(dst, &dst_adj);
        let mut a = src_fp.clone();
        let mut b = dst_fp.clone();
        a.sort();
        b.sort();
        Isomorphisms {
            m,
            done: !comparable || a != b,
            src_fp,
            dst_fp,
            src_adj,
            dst_adj,
            src_vertices,
            dst_vertices,
            phi: vec![0; m],
            used: 0,
            next: vec![0; m + 1],
            depth: 0,
        }
    }

    fn consistent(&self, depth: usize, cand: usize) -> bool {
        if self.used >> cand & 1 == 1 || self.src_fp[depth] != self.dst_fp[cand] {
            return false;
        }
        (0..depth).all(|i| {
            let a = self.src_adj[depth] >> i & 1;
            let b = self.dst_adj[cand] >> self.phi[i] & 1;
            a == b
        })
    }

    fn is_complete_match(&self) -> bool {
        self.src_vertices
            .iter()
            .all(|v| self.dst_vertices.contains(&v.map(&self.phi)))
    }
}

impl Iterator for Isomorphisms {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            if self.done {
                return None;
            }
            if self.depth == self.m {
                let found = self.is_complete_match().then(|| self.phi.clone());
                if self.m == 0 {
                    self.done = true;
                    return found;
                }
                self.depth -= 1;
                self.used &= !(1u64 << self.phi[self.depth]);
                if found.is_some() {
                    return found;
                }
                continue;
            }
            let d = self.depth;
            match (self.next[d]..self.m).find(|&c| self.consistent(d, c)) {
                Some(c) => {
                    self.phi[d] = c;
                    self.used |= 1u64 << c;
                    self.next[d] = c + 1;
                    self.depth += 1;
                    self.next[self.depth] = 0;
                }
                None => {
                    if d == 0 {
                        self.done = true;
                        return None;
                    }
                    self.depth -= 1;
                    self.used &= !(1u64 << self.phi[self.depth]);
                }
            }
        }
    }
}

/// Stream of simplicial isomorphisms `src → dst` as permutation arrays
/// (`phi[j]` is the image of facet `j`). Empty when none exist.
pub fn enumerate_isomorphisms(src: &SimpleCombinatorics, dst: &SimpleCombinatorics) -> Isomorphisms {
    Isomorphisms::new(src, dst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(v: &[&[usize]]) -> Vec<Vec<usize>> {
        v.iter().map(|s| s.to_vec()).collect()
    }

    #[test]
    fn small_complexes_validate() {
        let tri = SimpleCombinatorics::with_default_labels(2, 3, sets(&[&[0, 1], &[1, 2], &[0, 2]]));
        assert!(validate_complex(&tri).is_empty());
        assert!(validate_complex(&SimpleCombinatorics::polygon(4)).is_empty());
        assert!(validate_complex(&SimpleCombinatorics::cube(3)).is_empty());
        assert!(validate_complex(&SimpleCombinatorics::simplex(1)).is_empty());
        assert!(validate_complex(&SimpleCombinatorics::simplex(4)).is_empty());
    }

    #[test]
    fn duplicate_vertex_reported() {
        let k = SimpleCombinatorics::with_default_labels(2, 3, sets(&[&[0, 1], &[1, 2], &[0, 2], &[0, 1]]));
        let v = validate_complex(&k);
        assert!(v.contains(&ComplexViolation::DuplicateVertex { first: 0, second: 3 }));
    }

    #[test]
    fn structural_violations() {
        let k = SimpleCombinatorics::with_default_labels(2, 3, sets(&[&[0, 1], &[1, 5], &[0]]));
        let v = validate_complex(&k);
        assert!(v.contains(&ComplexViolation::FacetIndexOutOfRange { vertex: 1, facet: 5 }));
        assert!(v.contains(&ComplexViolation::WrongVertexSize { vertex: 2, size: 1 }));

        // two disjoint triangles
        let k = SimpleCombinatorics::with_default_labels(
            2,
            6,
            sets(&[&[0, 1], &[1, 2], &[0, 2], &[3, 4], &[4, 5], &[3, 5]]),
        );
        assert_eq!(
            validate_complex(&k),
            vec![ComplexViolation::Disconnected { components: 2 }]
        );

        // open path: ridges {0} and {3} lie in a single vertex
        let k = SimpleCombinatorics::with_default_labels(2, 4, sets(&[&[0, 1], &[1, 2], &[2, 3]]));
        let v = validate_complex(&k);
        assert!(v.contains(&ComplexViolation::RidgeNotShared {
            ridge: vec![0],
            count: 1
        }));
        assert!(v.contains(&ComplexViolation::RidgeNotShared {
            ridge: vec![3],
            count: 1
        }));

        let k = SimpleCombinatorics::with_default_labels(2, 4, sets(&[&[0, 1], &[1, 2], &[0, 2]]));
        assert!(validate_complex(&k).contains(&ComplexViolation::UnusedFacet { facet: 3 }));
    }

    /// Exhaustive oracle: scan every subset of facets.
    fn mnf_oracle(k: &SimpleCombinatorics) -> Vec<Vec<usize>> {
        let m = k.facet_count();
        let mut out = Vec::new();
        for mask in 1u64..(1 << m) {
            let s = FacetSet(mask);
            if k.is_face(s) {
                continue;
            }
            if s.indices().iter().all(|&i| k.is_face(FacetSet(mask & !(1 << i)))) {
                out.push(s.indices());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn minimal_non_face_examples() {
        assert_eq!(
            minimal_non_faces(&SimpleCombinatorics::polygon(4)),
            sets(&[&[0, 2], &[1, 3]])
        );
        assert_eq!(minimal_non_faces(&SimpleCombinatorics::simplex(2)), sets(&[&[0, 1, 2]]));
        assert_eq!(
            minimal_non_faces(&SimpleCombinatorics::polygon(5)),
            sets(&[&[0, 2], &[0, 3], &[1, 3], &[1, 4], &[2, 4]])
        );
    }

    #[test]
    fn minimal_non_faces_match_exhaustive_scan() {
        let mut corpus = vec![SimpleCombinatorics::cube(3), SimpleCombinatorics::cube(4)];
        corpus.extend((1..=5).map(SimpleCombinatorics::simplex));
        corpus.extend((3..=9).map(SimpleCombinatorics::polygon));
        for k in corpus {
            assert_eq!(minimal_non_faces(&k), mnf_oracle(&k));
        }
    }

    #[test]
    fn f_vectors() {
        assert_eq!(f_vector(&SimpleCombinatorics::simplex(2)), vec![1, 3, 3]);
        assert_eq!(f_vector(&SimpleCombinatorics::polygon(4)), vec![1, 4, 4]);
        assert_eq!(f_vector(&SimpleCombinatorics::cube(3)), vec![1, 6, 12, 8]);
    }

    fn iso_oracle(a: &SimpleCombinatorics, b: &SimpleCombinatorics) -> Vec<Vec<usize>> {
        let target: HashSet<FacetSet> = b.vertex_sets().into_iter().collect();
        (0..a.facet_count())
            .permutations(a.facet_count())
            .filter(|phi| {
                a.vertex_sets().iter().all(|v| target.contains(&v.map(phi))) && a.vertices().len() == b.vertices().len()
            })
            .collect()
    }

    #[test]
    fn isomorphism_counts() {
        let sq = SimpleCombinatorics::polygon(4);
        let found: Vec<_> = enumerate_isomorphisms(&sq, &sq).collect();
        assert_eq!(found.len(), 8);
        assert_eq!(found, iso_oracle(&sq, &sq));

        let tri = SimpleCombinatorics::simplex(2);
        assert_eq!(enumerate_isomorphisms(&tri, &tri).count(), 6);

        assert_eq!(enumerate_isomorphisms(&sq, &SimpleCombinatorics::polygon(5)).count(), 0);
        assert_eq!(enumerate_isomorphisms(&sq, &tri).count(), 0);

        let cube = SimpleCombinatorics::cube(3);
        assert_eq!(enumerate_isomorphisms(&cube, &cube).count(), 48);
    }

    #[test]
    fn isomorphisms_between_relabelings() {
        let cube = SimpleCombinatorics::cube(3);
        let phi = vec![3, 5, 0, 1, 4, 2];
        let other = cube.relabel(&phi);
        let found: Vec<_> = enumerate_isomorphisms(&cube, &other).collect();
        assert_eq!(found, iso_oracle(&cube, &other));
        assert!(found.contains(&phi));
    }

    #[test]
    fn group_closure() {
        for k in [
            SimpleCombinatorics::polygon(5),
            SimpleCombinatorics::simplex(3),
            SimpleCombinatorics::cube(3),
        ] {
            let group: HashSet<Vec<usize>> = enumerate_isomorphisms(&k, &k).collect();
            let id: Vec<usize> = (0..k.facet_count()).collect();
            assert!(group.contains(&id));
            for a in &group {
                for b in &group {
                    let comp: Vec<usize> = (0..k.facet_count()).map(|j| b[a[j]]).collect();
                    assert!(group.contains(&comp));
                }
            }
            let f = f_vector(&k);
            for g in &group {
                assert_eq!(f_vector(&k.relabel(g)), f);
            }
        }
    }
}
