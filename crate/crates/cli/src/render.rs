//! Human-readable text. Facets are numbered from 1 here, matching `F1, …, Fm`.

use std::fmt::Write;

use num_bigint::BigInt;
use serde_json::{json, Value};

use torigid_core::charpair::{HyperCharPair, PairViolation};
use torigid_core::complexes::ComplexViolation;
use torigid_core::linalg::IntMatrix;
use torigid_core::rigidity::EquivalenceCertificate;

pub fn vector(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn facet(j: usize) -> String {
    format!("F{}", j + 1)
}

pub fn facet_set(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|&j| facet(j)).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn matrix(m: &IntMatrix, indent: &str) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{indent}[{}]", padded.join(" "));
    }
    out
}

pub fn pair(p: &HyperCharPair, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        let _ = writeln!(out, "name: {name}");
    }
    let _ = writeln!(
        out,
        "dimension {}, torus rank {}, {} facets, {} vertices",
        p.dim(),
        p.torus_rank(),
        p.facet_count(),
        p.combinatorics().vertices().len()
    );
    let labels = p.combinatorics().facet_labels();
    for (j, label) in labels.iter().enumerate() {
        let name = facet(j);
        if *label == name {
            let _ = writeln!(out, "  {name}: {}", vector(&p.column(j)));
        } else {
            let _ = writeln!(out, "  {name} {label}: {}", vector(&p.column(j)));
        }
    }
    let verts: Vec<String> = p.combinatorics().vertices().iter().map(|v| facet_set(v)).collect();
    let _ = writeln!(out, "vertices: {}", verts.join(" "));
    out
}

fn complex_violation(c: &ComplexViolation) -> String {
    use ComplexViolation::*;
    match c {
        TooManyFacets { .. } | NoVertices | Disconnected { .. } => c.to_string(),
        FacetIndexOutOfRange { vertex, facet: f } => {
            format!("vertex #{} uses facet index {} out of range", vertex + 1, f + 1)
        }
        RepeatedFacet { vertex, facet: f } => format!("vertex #{} lists {} twice", vertex + 1, facet(*f)),
        WrongVertexSize { vertex, size } => {
            format!("vertex #{} meets {size} facets instead of the dimension", vertex + 1)
        }
        DuplicateVertex { first, second } => format!("vertices #{} and #{} coincide", first + 1, second + 1),
        UnusedFacet { facet: f } => format!("{} contains no vertex", facet(*f)),
        RidgeNotShared { ridge, count } => {
            format!("ridge {} lies in {count} vertices instead of 2", facet_set(ridge))
        }
    }
}

pub fn violation(v: &PairViolation) -> String {
    match v {
        PairViolation::Complex(c) => complex_violation(c),
        PairViolation::NonPrimitiveColumn { facet: f } => format!("vector of {} is not primitive", facet(*f)),
        PairViolation::BasisCondition {
            vertex,
            invariant_factors,
        } => {
            let fs: Vec<String> = invariant_factors.iter().map(ToString::to_string).collect();
            format!(
                "vertex {}: vectors do not extend to a basis, invariant factors ({})",
                facet_set(vertex),
                fs.join(",")
            )
        }
    }
}

/// Machine form, 0-based like the files.
pub fn violation_json(v: &PairViolation) -> Value {
    match v {
        PairViolation::Complex(c) => json!({ "kind": "complex", "message": c.to_string() }),
        PairViolation::NonPrimitiveColumn { facet } => json!({ "kind": "non-primitive", "facet": facet }),
        PairViolation::BasisCondition {
            vertex,
            invariant_factors,
        } => json!({
            "kind": "basis-condition",
            "vertex": vertex,
            "invariant_factors": crate::doc::ints(invariant_factors),
        }),
    }
}

pub fn certificate(c: &EquivalenceCertificate) -> String {
    let mut out = String::new();
    let phi: Vec<String> = c
        .phi
        .iter()
        .enumerate()
        .map(|(j, &t)| format!("{}->{}", facet(j), facet(t)))
        .collect();
    let _ = writeln!(out, "phi: {}", phi.join(" "));
    let eps: Vec<&str> = c.eps.iter().map(|&e| if e > 0 { "+" } else { "-" }).collect();
    let _ = writeln!(out, "eps: {}", eps.join(" "));
    let _ = writeln!(out, "A:");
    out.push_str(&matrix(&c.a, "  "));
    out
}
