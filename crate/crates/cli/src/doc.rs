//! JSON interchange formats.
//!
//! Integers are written as JSON numbers while they fit the 53-bit safe range
//! and as decimal strings beyond it; both forms are accepted on input.
//! Rationals are always strings `"p/q"` (or `"p"` when integral), reduced with
//! a positive denominator. Output has sorted keys and no floats.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use torigid_core::charpair::{HyperCharPair, PairError};
use torigid_core::complexes::SimpleCombinatorics;
use torigid_core::geometry::{GeometryError, HPolytope, Inequality, LatticePolytopeV};
use torigid_core::linalg::{IntMatrix, LinalgError};
use torigid_core::rigidity::EquivalenceCertificate;

pub const FORMAT_VERSION: &str = "1";
const SAFE_INTEGER: i64 = (1 << 53) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("unsupported format_version {0:?}")]
    FormatVersion(String),
    #[error("malformed integer {0:?}")]
    Integer(String),
    #[error("malformed rational {0:?}: expected reduced \"p/q\" with q > 0")]
    Rational(String),
    #[error("{what}: expected length {expected}, found {found}")]
    Dimension {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn check_version(v: &str) -> Result<(), DocError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(DocError::FormatVersion(v.to_string()))
    }
}

fn check_len(what: impl Into<String>, expected: usize, found: usize) -> Result<(), DocError> {
    if expected == found {
        Ok(())
    } else {
        Err(DocError::Dimension {
            what: what.into(),
            expected,
            found,
        })
    }
}

/// Arbitrary-precision integer with the number-or-string JSON encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl From<&BigInt> for JsonInt {
    fn from(x: &BigInt) -> Self {
        JsonInt(x.clone())
    }
}

impl From<i64> for JsonInt {
    fn from(x: i64) -> Self {
        JsonInt(BigInt::from(x))
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() <= SAFE_INTEGER => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(text).ok()
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;

        impl Visitor<'_> for IntVisitor {
            type Value = JsonInt;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an integer or a decimal integer string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                parse_integer(v)
                    .map(JsonInt)
                    .ok_or_else(|| E::custom(DocError::Integer(v.to_string())))
            }
        }

        d.deserialize_any(IntVisitor)
    }
}

pub fn ints(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().map(JsonInt::from).collect()
}

pub fn unwrap_ints(v: &[JsonInt]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

pub fn matrix_rows(m: &IntMatrix) -> Vec<Vec<JsonInt>> {
    (0..m.rows()).map(|i| ints(m.row(i))).collect()
}

pub fn matrix_from_rows(rows: &[Vec<JsonInt>], cols: usize) -> Result<IntMatrix, DocError> {
    let mut entries = Vec::with_capacity(rows.len() * cols);
    for (i, r) in rows.iter().enumerate() {
        check_len(format!("matrix row {i}"), cols, r.len())?;
        entries.extend(unwrap_ints(r));
    }
    Ok(IntMatrix::from_entries(rows.len(), cols, entries)?)
}

/// Strict parser: `"p"` or `"p/q"` with `q > 0` and `gcd(p, q) = 1`.
pub fn parse_rational(text: &str) -> Result<BigRational, DocError> {
    let bad = || DocError::Rational(text.to_string());
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p, q),
        None => (text, "1"),
    };
    let p = parse_integer(p).ok_or_else(bad)?;
    if q.starts_with('-') {
        return Err(bad());
    }
    let q = parse_integer(q).ok_or_else(bad)?;
    if !q.is_positive() || !p.gcd(&q).is_one() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("documents serialize to json");
    let mut s = serde_json::to_string_pretty(&v).expect("json values print");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetEntry {
    pub label: String,
    pub xi: Vec<JsonInt>,
}

/// A pair as stored on disk; vertices list 0-based facet indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDocument {
    pub format_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub torus_rank: usize,
    pub facets: Vec<FacetEntry>,
    pub vertices: Vec<Vec<usize>>,
}

impl PairDocument {
    pub fn from_pair(p: &HyperCharPair, name: Option<String>) -> Self {
        let labels = p.combinatorics().facet_labels();
        PairDocument {
            format_version: FORMAT_VERSION.to_string(),
            name,
            dim: p.dim(),
            torus_rank: p.torus_rank(),
            facets: (0..p.facet_count())
                .map(|j| FacetEntry {
                    label: labels[j].clone(),
                    xi: ints(&p.column(j)),
                })
                .collect(),
            vertices: p.combinatorics().vertices().to_vec(),
        }
    }

    /// Shape checks only; the basis condition and the complex are validated separately.
    pub fn to_pair(&self) -> Result<HyperCharPair, DocError> {
        check_version(&self.format_version)?;
        let mut cols = Vec::with_capacity(self.facets.len());
        for (j, f) in self.facets.iter().enumerate() {
            check_len(format!("xi of facet {j}"), self.torus_rank, f.xi.len())?;
            cols.push(unwrap_ints(&f.xi));
        }
        let xi = IntMatrix::from_columns(self.torus_rank, &cols)?;
        let labels = self.facets.iter().map(|f| f.label.clone()).collect();
        let comb = SimpleCombinatorics::new(self.dim, labels, self.vertices.clone());
        Ok(HyperCharPair::new(comb, xi)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InequalityEntry {
    pub a: Vec<String>,
    pub b: String,
    pub label: String,
    pub xi: Vec<JsonInt>,
}

/// An H-polytope `a·x ≤ b` with a vector on every inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryDocument {
    pub format_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub inequalities: Vec<InequalityEntry>,
}

impl GeometryDocument {
    pub fn from_polytope(h: &HPolytope, xi: &IntMatrix, name: Option<String>) -> Self {
        GeometryDocument {
            format_version: FORMAT_VERSION.to_string(),
            name,
            dim: h.dim(),
            inequalities: h
                .inequalities()
                .iter()
                .zip(h.facet_labels())
                .enumerate()
                .map(|(j, (ineq, label))| InequalityEntry {
                    a: ineq.a.iter().map(format_rational).collect(),
                    b: format_rational(&ineq.b),
                    label: label.clone(),
                    xi: ints(&xi.column(j)),
                })
                .collect(),
        }
    }

    pub fn to_polytope(&self) -> Result<(HPolytope, IntMatrix), DocError> {
        check_version(&self.format_version)?;
        let t = self.inequalities.first().map_or(0, |e| e.xi.len());
        let mut inequalities = Vec::with_capacity(self.inequalities.len());
        let mut cols = Vec::with_capacity(self.inequalities.len());
        for (j, e) in self.inequalities.iter().enumerate() {
            check_len(format!("a of inequality {j}"), self.dim, e.a.len())?;
            check_len(format!("xi of inequality {j}"), t, e.xi.len())?;
            inequalities.push(Inequality {
                a: e.a.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?,
                b: parse_rational(&e.b)?,
            });
            cols.push(unwrap_ints(&e.xi));
        }
        let labels = self.inequalities.iter().map(|e| e.label.clone()).collect();
        let h = HPolytope::new(self.dim, inequalities, labels)?;
        Ok((h, IntMatrix::from_columns(t, &cols)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFacet {
    pub label: String,
    pub vertices: Vec<usize>,
}

/// Lattice polytope away from the origin, by vertices and facet incidences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub format_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<Vec<JsonInt>>,
    pub facets: Vec<LatticeFacet>,
}

impl LatticeDocument {
    pub fn from_polytope(l: &LatticePolytopeV, name: Option<String>) -> Self {
        LatticeDocument {
            format_version: FORMAT_VERSION.to_string(),
            name,
            vertices: l.vertices.iter().map(|v| ints(v)).collect(),
            facets: l
                .facets
                .iter()
                .zip(&l.facet_labels)
                .map(|(f, label)| LatticeFacet {
                    label: label.clone(),
                    vertices: f.clone(),
                })
                .collect(),
        }
    }

    pub fn to_polytope(&self) -> Result<LatticePolytopeV, DocError> {
        check_version(&self.format_version)?;
        Ok(LatticePolytopeV::new(
            self.vertices.iter().map(|v| unwrap_ints(v)).collect(),
            self.facets.iter().map(|f| f.vertices.clone()).collect(),
            self.facets.iter().map(|f| f.label.clone()).collect(),
        ))
    }
}

/// `(φ, ε, A)` with `A·ξ_j = ε_j·ξ′_{φ(j)}`; `a` is stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub format_version: String,
    pub phi: Vec<usize>,
    pub eps: Vec<i8>,
    pub a: Vec<Vec<JsonInt>>,
}

impl CertificateDocument {
    pub fn from_certificate(c: &EquivalenceCertificate) -> Self {
        CertificateDocument {
            format_version: FORMAT_VERSION.to_string(),
            phi: c.phi.clone(),
            eps: c.eps.clone(),
            a: matrix_rows(&c.a),
        }
    }

    pub fn to_certificate(&self) -> Result<EquivalenceCertificate, DocError> {
        check_version(&self.format_version)?;
        Ok(EquivalenceCertificate {
            phi: self.phi.clone(),
            eps: self.eps.clone(),
            a: matrix_from_rows(&self.a, self.a.len())?,
            split_data: None,
        })
    }
}
