//! Deciding weak equivariant homeomorphism of two pairs.
//!
//! Two pairs are weakly equivalent when there is a facet bijection `φ` that is
//! a simplicial isomorphism, signs `ε_j ∈ {±1}` and `A ∈ GL(n+k, ℤ)` with
//! `A·ξ_j = ε_j·ξ′_{φ(j)}` for every facet `j`. The search either returns such
//! a certificate or exhausts every candidate. When both images are direct
//! summands, exhaustion proves the manifolds are not weakly equivariantly
//! homeomorphic; otherwise it only shows that no certificate of this shape exists.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::charpair::{is_direct_summand_image, pi1_quotient_bound, rank_of, split, AbelianGroup, HyperCharPair};
use crate::complexes::{enumerate_isomorphisms, f_vector, FacetSet};
use crate::linalg::{smith_normal_form, IntMatrix, RatMatrix};

/// Invariants preserved by every `(φ, ε, A)` transformation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub dim: usize,
    pub k: usize,
    pub rank: usize,
    pub f_vector: Vec<u64>,
    pub cokernel: AbelianGroup,
    /// Sorted indices of each vertex's vectors inside their saturation.
    pub vertex_indices: Vec<BigInt>,
}

pub fn quick_invariants(p: &HyperCharPair) -> Fingerprint {
    let mut vertex_indices: Vec<BigInt> = p
        .combinatorics()
        .vertices()
        .iter()
        .map(|v| {
            smith_normal_form(&p.xi().select_columns(v))
                .invariant_factors()
                .iter()
                .product()
        })
        .collect();
    vertex_indices.sort();
    Fingerprint {
        dim: p.dim(),
        k: p.k(),
        rank: rank_of(p),
        f_vector: f_vector(p.combinatorics()),
        cokernel: pi1_quotient_bound(p),
        vertex_indices,
    }
}

impl Fingerprint {
    /// Name of the first component on which the two fingerprints differ.
    pub fn first_difference(&self, other: &Fingerprint) -> Option<&'static str> {
        if self.dim != other.dim {
            Some("dimension")
        } else if self.k != other.k {
            Some("k")
        } else if self.rank != other.rank {
            Some("rank")
        } else if self.f_vector != other.f_vector {
            Some("f-vector")
        } else if self.cokernel != other.cokernel {
            Some("cokernel")
        } else if self.vertex_indices != other.vertex_indices {
            Some("vertex indices")
        } else {
            None
        }
    }
}

/// Change-of-basis data used when rank-deficient pairs were split before searching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitData {
    pub source_change: IntMatrix,
    pub target_change: IntMatrix,
    /// The certificate matrix between the reduced pairs.
    pub reduced_a: IntMatrix,
}

/// `(φ, ε, A)` with `A·ξ_j = ε_j·ξ′_{φ(j)}`; `A` maps the first pair's vectors to the second's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCertificate {
    pub phi: Vec<usize>,
    pub eps: Vec<i8>,
    pub a: IntMatrix,
    pub split_data: Option<SplitData>,
}

impl EquivalenceCertificate {
    pub fn identity(p: &HyperCharPair) -> Self {
        EquivalenceCertificate {
            phi: (0..p.facet_count()).collect(),
            eps: vec![1; p.facet_count()],
            a: IntMatrix::identity(p.torus_rank()),
            split_data: None,
        }
    }

    /// Certificate for the reverse direction.
    pub fn inverse(&self) -> Result<Self, crate::linalg::LinalgError> {
        let mut phi = vec![0; self.phi.len()];
        let mut eps = vec![1; self.eps.len()];
        for (j, &t) in self.phi.iter().enumerate() {
            phi[t] = j;
            eps[t] = self.eps[j];
        }
        Ok(EquivalenceCertificate {
            phi,
            eps,
            a: self.a.inverse_unimodular()?,
            split_data: None,
        })
    }

    /// `other ∘ self`: first `self` (p → q), then `other` (q → r).
    pub fn then(&self, other: &EquivalenceCertificate) -> Self {
        let phi = self.phi.iter().map(|&t| other.phi[t]).collect();
        let eps = self
            .phi
            .iter()
            .enumerate()
            .map(|(j, &t)| self.eps[j] * other.eps[t])
            .collect();
        EquivalenceCertificate {
            phi,
            eps,
            a: &other.a * &self.a,
            split_data: None,
        }
    }
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("pairs differ in facet count, dimension or torus rank")]
    ShapeMismatch,
    #[error("phi is not a permutation of the facets")]
    NotAPermutation,
    #[error("phi does not carry the vertices of the first polytope onto those of the second")]
    NotSimplicial,
    #[error("sign vector has wrong length or entries other than ±1")]
    BadSigns,
    #[error("matrix has wrong shape or is not unimodular")]
    NotUnimodular,
    #[error("column equation fails at facet {0}")]
    ColumnEquation(usize),
}

/// Rechecks every certificate condition from scratch.
pub fn check_certificate(
    p: &HyperCharPair,
    q: &HyperCharPair,
    cert: &EquivalenceCertificate,
) -> Result<(), CertificateError> {
    let m = p.facet_count();
    if m != q.facet_count() || p.dim() != q.dim() || p.torus_rank() != q.torus_rank() {
        return Err(CertificateError::ShapeMismatch);
    }
    let mut seen = vec![false; m];
    if cert.phi.len() != m {
        return Err(CertificateError::NotAPermutation);
    }
    for &t in &cert.phi {
        if t >= m || seen[t] {
            return Err(CertificateError::NotAPermutation);
        }
        seen[t] = true;
    }
    let mut src: Vec<FacetSet> = p
        .combinatorics()
        .vertex_sets()
        .iter()
        .map(|v| v.map(&cert.phi))
        .collect();
    let mut dst = q.combinatorics().vertex_sets();
    src.sort();
    dst.sort();
    if src != dst {
        return Err(CertificateError::NotSimplicial);
    }
    if cert.eps.len() != m || cert.eps.iter().any(|&e| e != 1 && e != -1) {
        return Err(CertificateError::BadSigns);
    }
    let t = p.torus_rank();
    if cert.a.rows() != t || cert.a.cols() != t || !cert.a.is_unimodular() {
        return Err(CertificateError::NotUnimodular);
    }
    for j in 0..m {
        let lhs = cert.a.mul_vec(&p.column(j));
        let target = q.column(cert.phi[j]);
        let rhs: Vec<BigInt> = if cert.eps[j] > 0 {
            target
        } else {
            target.iter().map(|x| -x).collect()
        };
        if lhs != rhs {
            return Err(CertificateError::ColumnEquation(j));
        }
    }
    Ok(())
}

pub fn verify_certificate(p: &HyperCharPair, q: &HyperCharPair, cert: &EquivalenceCertificate) -> bool {
    check_certificate(p, q, cert).is_ok()
}

/// Strength of an inequivalence verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InequivalenceGuarantee {
    /// Both images are direct summands, so the rigidity theorem applies.
    CertifiedByRigidity,
    /// No certificate exists, but the manifolds might still be weakly equivalent.
    SearchExhaustive,
}

impl fmt::Display for InequivalenceGuarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InequivalenceGuarantee::CertifiedByRigidity => write!(f, "certified-by-rigidity-theorem"),
            InequivalenceGuarantee::SearchExhaustive => write!(f, "search-exhaustive-sufficiency-only"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InequivalenceReason {
    FingerprintMismatch(&'static str),
    Exhausted { isomorphisms: u64, sign_branches: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent(EquivalenceCertificate),
    Inequivalent {
        reason: InequivalenceReason,
        guarantee: InequivalenceGuarantee,
    },
    NotSupported(String),
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Equivalent(_) => "equivalent",
            Verdict::Inequivalent { .. } => "inequivalent",
            Verdict::NotSupported(_) => "not-supported",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Maximum number of sign branches to examine; `None` searches exhaustively.
    pub branch_budget: Option<u64>,
}

pub fn decide_weak_equivalence(p: &HyperCharPair, q: &HyperCharPair) -> Verdict {
    decide_weak_equivalence_with(p, q, &SearchOptions::default())
}

pub fn decide_weak_equivalence_with(p: &HyperCharPair, q: &HyperCharPair, opts: &SearchOptions) -> Verdict {
    let guarantee = if is_direct_summand_image(p) && is_direct_summand_image(q) {
        InequivalenceGuarantee::CertifiedByRigidity
    } else {
        InequivalenceGuarantee::SearchExhaustive
    };
    if let Some(field) = quick_invariants(p).first_difference(&quick_invariants(q)) {
        return Verdict::Inequivalent {
            reason: InequivalenceReason::FingerprintMismatch(field),
            guarantee,
        };
    }

    let deficient = rank_of(p) < p.torus_rank();
    let (sp, sq) = if deficient {
        (Some(split(p)), Some(split(q)))
    } else {
        (None, None)
    };
    let rp = sp.as_ref().map_or(p, |s| &s.reduced);
    let rq = sq.as_ref().map_or(q, |s| &s.reduced);

    match search(rp, rq, opts) {
        SearchOutcome::Found { phi, eps, a } => {
            let cert = match (sp, sq) {
                (Some(sp), Some(sq)) => {
                    let lifted = a.direct_sum_identity(sp.torus_factor);
                    let back = sq
                        .change_of_basis
                        .inverse_unimodular()
                        .expect("change of basis is unimodular");
                    EquivalenceCertificate {
                        phi,
                        eps,
                        a: &(&back * &lifted) * &sp.change_of_basis,
                        split_data: Some(SplitData {
                            source_change: sp.change_of_basis,
                            target_change: sq.change_of_basis,
                            reduced_a: a,
                        }),
                    }
                }
                _ => EquivalenceCertificate {
                    phi,
                    eps,
                    a,
                    split_data: None,
                },
            };
            debug_assert_eq!(check_certificate(p, q, &cert), Ok(()));
            Verdict::Equivalent(cert)
        }
        SearchOutcome::Exhausted {
            isomorphisms,
            sign_branches,
        } => Verdict::Inequivalent {
            reason: InequivalenceReason::Exhausted {
                isomorphisms,
                sign_branches,
            },
            guarantee,
        },
        SearchOutcome::Budget => Verdict::NotSupported("branch budget exhausted".into()),
    }
}

enum SearchOutcome {
    Found {
        phi: Vec<usize>,
        eps: Vec<i8>,
        a: IntMatrix,
    },
    Exhausted {
        isomorphisms: u64,
        sign_branches: u64,
    },
    Budget,
}

/// Leftmost columns that raise the rational rank, until it is full.
fn spanning_columns(xi: &IntMatrix) -> Vec<usize> {
    let mut chosen = Vec::new();
    for j in 0..xi.cols() {
        let mut trial = chosen.clone();
        trial.push(j);
        if xi.select_columns(&trial).rank() == trial.len() {
            chosen = trial;
        }
        if chosen.len() == xi.rows() {
            break;
        }
    }
    chosen
}

/// Search for full-rank pairs: `A` is forced by its values on a spanning set
/// `S`, so each `(φ, signs on S)` determines at most one candidate. The sign of
/// the first column of `S` is fixed to `+1`, since `−A` flips every sign.
fn search(p: &HyperCharPair, q: &HyperCharPair, opts: &SearchOptions) -> SearchOutcome {
    let t = p.torus_rank();
    let anchor = spanning_columns(p.xi());
    debug_assert_eq!(anchor.len(), t);
    let x = p.xi().select_columns(&anchor);
    let det_x = x.determinant();
    // adj(X) = det(X)·X⁻¹ is integral
    let adj = {
        let inv = RatMatrix::from_int(&x)
            .inverse()
            .expect("spanning columns are independent");
        let mut entries = Vec::with_capacity(t * t);
        for i in 0..t {
            for j in 0..t {
                let v = inv.get(i, j) * num_rational::BigRational::from_integer(det_x.clone());
                entries.push(v.to_integer());
            }
        }
        IntMatrix::from_entries(t, t, entries).expect("square")
    };

    let mut isomorphisms = 0u64;
    let mut sign_branches = 0u64;
    for phi in enumerate_isomorphisms(p.combinatorics(), q.combinatorics()) {
        isomorphisms += 1;
        let targets: Vec<usize> = anchor.iter().map(|&j| phi[j]).collect();
        let y = q.xi().select_columns(&targets);
        if y.determinant().abs() != det_x.abs() {
            continue;
        }
        let free = anchor.len().saturating_sub(1);
        for pattern in 0u64..(1u64 << free) {
            sign_branches += 1;
            if opts.branch_budget.is_some_and(|b| sign_branches > b) {
                return SearchOutcome::Budget;
            }
            let mut ye = y.clone();
            for s in 0..free {
                if pattern >> s & 1 == 1 {
                    for i in 0..t {
                        ye[(i, s + 1)] = -&ye[(i, s + 1)];
                    }
                }
            }
            let scaled = &ye * &adj;
            if scaled.entries().iter().any(|e| !(e % &det_x).is_zero()) {
                continue;
            }
            let entries = scaled.entries().iter().map(|e| e / &det_x).collect();
            let a = IntMatrix::from_entries(t, t, entries).expect("square");
            if !a.determinant().abs().is_one() {
                continue;
            }
            if let Some(eps) = column_signs(p, q, &phi, &a) {
                return SearchOutcome::Found { phi, eps, a };
            }
        }
    }
    SearchOutcome::Exhausted {
        isomorphisms,
        sign_branches,
    }
}

fn column_signs(p: &HyperCharPair, q: &HyperCharPair, phi: &[usize], a: &IntMatrix) -> Option<Vec<i8>> {
    (0..p.facet_count())
        .map(|j| {
            let image = a.mul_vec(&p.column(j));
            let target = q.column(phi[j]);
            if image == target {
                Some(1)
            } else if image.iter().zip(&target).all(|(x, y)| x == &-y) {
                Some(-1)
            } else {
                None
            }
        })
        .collect()
}
