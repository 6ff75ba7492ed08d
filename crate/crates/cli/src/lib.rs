//! `torigid`: validate, inspect, construct and compare hyper characteristic
//! pairs stored as JSON documents.
//!
//! Exit codes: 0 for success or a positive answer, 1 for a negative answer
//! on valid input, 2 for errors (with `error[code]: message` on stderr).

pub mod doc;
pub mod error;
pub mod render;

use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use torigid_core::charpair::{
    is_direct_summand_image, kernel_subtorus, moment_angle_pair, pi1_quotient_bound, rank_of, split, validate_pair,
    HyperCharPair, PairViolation,
};
use torigid_core::cohomology::{hilbert_coefficients, sr_presentation};
use torigid_core::complexes::{f_vector, validate_complex, SimpleCombinatorics};
use torigid_core::geometry::{combinatorics_of, cone_normals, good_contact_pair, hyperplane_cut};
use torigid_core::rigidity::{
    check_certificate, decide_weak_equivalence_with, quick_invariants, Fingerprint, InequivalenceReason, SearchOptions,
    Verdict,
};

use doc::{ints, matrix_rows, to_canonical_json, CertificateDocument, GeometryDocument, LatticeDocument, PairDocument};
pub use error::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "torigid", version, about = "Exact tools for hyper characteristic pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; documents default to json, reports to text.
    #[arg(long, value_enum, global = true)]
    pub output: Option<OutputFormat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the complex, primitivity and the basis condition at every vertex.
    Validate { file: PathBuf },
    /// Rank, k, f-vector, direct-summand flag, fundamental group bound and fingerprint.
    Info { file: PathBuf },
    /// Stanley–Reisner presentation with the algebra structure map.
    Sr {
        file: PathBuf,
        /// Append graded ranks up to this degree.
        #[arg(long, value_name = "D")]
        hilbert: Option<usize>,
    },
    /// Decide weak equivalence, or recheck a stored certificate.
    Equiv {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, value_name = "CERTFILE")]
        verify: Option<PathBuf>,
        /// Give up after this many sign branches.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Cut a polytope by a hyperplane and emit the pair on the section.
    Cut {
        geomfile: PathBuf,
        /// Hyperplane `c1,...,cn;d` meaning c·x = d; entries may be fractions.
        #[arg(long, allow_hyphen_values = true)]
        plane: String,
    },
    /// The pair with identity vectors over the same polytope.
    MomentAngle { file: PathBuf },
    /// Pair of primitive outward normals of a lattice cone.
    Contact { vfile: PathBuf },
    /// Split off the torus factor acting trivially.
    Split { file: PathBuf },
}

/// Everything a command produced: exit code, stdout text and stderr diagnostics.
#[derive(Debug, Default)]
pub struct Outcome {
    pub exit: i32,
    pub stdout: String,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            exit: EXIT_OK,
            stdout,
            diagnostics: Vec::new(),
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    parse_json(path, &read_text(path)?)
}

fn doc_err(path: &Path) -> impl FnOnce(doc::DocError) -> CliError + '_ {
    move |source| CliError::Document {
        path: path.to_path_buf(),
        source,
    }
}

pub fn load_pair(path: &Path) -> Result<(HyperCharPair, Option<String>), CliError> {
    let d: PairDocument = read_json(path)?;
    let p = d.to_pair().map_err(doc_err(path))?;
    Ok((p, d.name))
}

fn complex_violations(p: &HyperCharPair) -> Vec<PairViolation> {
    validate_pair(p)
        .into_iter()
        .filter(|v| matches!(v, PairViolation::Complex(_)))
        .collect()
}

fn require_complex(path: &Path, p: &HyperCharPair) -> Result<(), CliError> {
    match complex_violations(p).len() {
        0 => Ok(()),
        count => Err(CliError::InvalidPair {
            path: path.to_path_buf(),
            count,
        }),
    }
}

fn require_valid(path: &Path, p: &HyperCharPair) -> Result<(), CliError> {
    match validate_pair(p).len() {
        0 => Ok(()),
        count => Err(CliError::InvalidPair {
            path: path.to_path_buf(),
            count,
        }),
    }
}

pub fn parse_plane(spec: &str) -> Result<(Vec<BigRational>, BigRational), CliError> {
    let bad = || CliError::Plane(spec.to_string());
    let (c, d) = spec.split_once(';').ok_or_else(bad)?;
    let parse = |s: &str| s.trim().parse::<BigRational>().map_err(|_| bad());
    let c = c.split(',').map(parse).collect::<Result<Vec<_>, _>>()?;
    Ok((c, parse(d)?))
}

fn fingerprint_json(f: &Fingerprint) -> Value {
    json!({
        "dim": f.dim,
        "k": f.k,
        "rank": f.rank,
        "f_vector": f.f_vector,
        "cokernel": { "free_rank": f.cokernel.free_rank, "torsion": ints(&f.cokernel.torsion) },
        "vertex_indices": ints(&f.vertex_indices),
    })
}

fn emit(format: OutputFormat, value: &Value, text: impl FnOnce() -> String) -> String {
    match format {
        OutputFormat::Json => to_canonical_json(value),
        OutputFormat::Text => text(),
    }
}

fn emit_pair(format: OutputFormat, p: &HyperCharPair, name: Option<String>) -> String {
    match format {
        OutputFormat::Json => to_canonical_json(&PairDocument::from_pair(p, name)),
        OutputFormat::Text => render::pair(p, name.as_deref()),
    }
}

/// Warnings for constructed pairs that fail validation.
fn construction_warnings(p: &HyperCharPair) -> Vec<String> {
    validate_pair(p)
        .iter()
        .map(|v| format!("warning: result violates: {}", render::violation(v)))
        .collect()
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let report = cli.output.unwrap_or(OutputFormat::Text);
    let document = cli.output.unwrap_or(OutputFormat::Json);
    match &cli.command {
        Command::Validate { file } => validate(file, report),
        Command::Info { file } => info(file, report),
        Command::Sr { file, hilbert } => sr(file, *hilbert, report),
        Command::Equiv {
            file1,
            file2,
            verify,
            budget,
        } => equiv(file1, file2, verify.as_deref(), *budget, report),
        Command::Cut { geomfile, plane } => cut(geomfile, plane, document),
        Command::MomentAngle { file } => moment_angle(file, document),
        Command::Contact { vfile } => contact(vfile, document),
        Command::Split { file } => split_cmd(file, document),
    }
}

fn validate(file: &Path, format: OutputFormat) -> Result<Outcome, CliError> {
    let (p, _) = load_pair(file)?;
    let violations = validate_pair(&p);
    let value = json!({
        "valid": violations.is_empty(),
        "violations": violations.iter().map(render::violation_json).collect::<Vec<_>>(),
    });
    let stdout = emit(format, &value, || {
        if violations.is_empty() {
            "valid\n".to_string()
        } else {
            let mut s = format!("invalid: {} violation(s)\n", violations.len());
            for v in &violations {
                let _ = writeln!(s, "  {}", render::violation(v));
            }
            s
        }
    });
    Ok(Outcome {
        exit: if violations.is_empty() { EXIT_OK } else { EXIT_NEGATIVE },
        stdout,
        diagnostics: Vec::new(),
    })
}

fn info(file: &Path, format: OutputFormat) -> Result<Outcome, CliError> {
    let (p, name) = load_pair(file)?;
    require_complex(file, &p)?;
    let violations = validate_pair(&p);
    let fp = quick_invariants(&p);
    let pi1 = pi1_quotient_bound(&p);
    let summand = is_direct_summand_image(&p);
    let free = kernel_subtorus(&p).is_free();
    let value = json!({
        "name": name,
        "dim": p.dim(),
        "torus_rank": p.torus_rank(),
        "k": p.k(),
        "facets": p.facet_count(),
        "rank": rank_of(&p),
        "f_vector": f_vector(p.combinatorics()),
        "direct_summand": summand,
        "kernel_free": free,
        "pi1_bound": pi1.to_string(),
        "valid": violations.is_empty(),
        "violations": violations.len(),
        "fingerprint": fingerprint_json(&fp),
    });
    let stdout = emit(format, &value, || {
        let mut s = String::new();
        if let Some(n) = &name {
            let _ = writeln!(s, "name: {n}");
        }
        let fv: Vec<String> = fp.f_vector.iter().map(ToString::to_string).collect();
        let idx: Vec<String> = fp.vertex_indices.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "dimension n: {}", p.dim());
        let _ = writeln!(s, "k: {}", p.k());
        let _ = writeln!(s, "torus rank n+k: {}", p.torus_rank());
        let _ = writeln!(s, "rank of xi: {}", fp.rank);
        let _ = writeln!(s, "f-vector: ({})", fv.join(","));
        let _ = writeln!(s, "image is a direct summand: {}", yes_no(summand));
        let _ = writeln!(s, "kernel acts freely: {}", yes_no(free));
        let _ = writeln!(s, "pi1 is a quotient of: {pi1}");
        let _ = writeln!(s, "valid: {}", yes_no(violations.is_empty()));
        let _ = writeln!(s, "vertex indices: {{{}}}", idx.join(","));
        s
    });
    Ok(Outcome::ok(stdout))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn sr(file: &Path, hilbert: Option<usize>, format: OutputFormat) -> Result<Outcome, CliError> {
    let (p, _) = load_pair(file)?;
    require_complex(file, &p)?;
    let pres = sr_presentation(&p);
    let labels = p.combinatorics().facet_labels();
    let ranks = hilbert.map(|d| hilbert_coefficients(&p, d));
    let mut value = json!({
        "generators": (0..pres.m).map(|j| json!({ "name": format!("tau{}", j + 1), "label": labels[j] })).collect::<Vec<_>>(),
        "relations": pres.relations,
        "algebra_map": matrix_rows(&pres.algebra_map_matrix),
        "reduced": pres.reduced.as_ref().map(|r| json!({
            "torus_factor": r.torus_factor,
            "reduced_map": matrix_rows(&r.reduced_map),
            "image_torsion": ints(&r.image_torsion),
        })),
    });
    if let Some(ranks) = &ranks {
        value["hilbert"] = json!(ranks.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    let stdout = emit(format, &value, || {
        let mut s = String::new();
        let gens: Vec<String> = (0..pres.m).map(|j| format!("tau{} ({})", j + 1, labels[j])).collect();
        let _ = writeln!(s, "generators: {}", gens.join(", "));
        let rels: Vec<String> = pres
            .relations
            .iter()
            .map(|r| r.iter().map(|j| format!("tau{}", j + 1)).collect::<Vec<_>>().join("*"))
            .collect();
        let _ = writeln!(
            s,
            "relations: {}",
            if rels.is_empty() {
                "none".to_string()
            } else {
                rels.join(", ")
            }
        );
        let _ = writeln!(s, "algebra map (row s is the image of e_s*):");
        s.push_str(&render::matrix(&pres.algebra_map_matrix, "  "));
        if let Some(r) = &pres.reduced {
            let tors: Vec<String> = r.image_torsion.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                s,
                "split torus factor: {}, image torsion: ({})",
                r.torus_factor,
                tors.join(",")
            );
            let _ = writeln!(s, "reduced map:");
            s.push_str(&render::matrix(&r.reduced_map, "  "));
        }
        if let Some(ranks) = &ranks {
            for (i, r) in ranks.iter().enumerate() {
                let _ = writeln!(s, "rank H^{}: {r}", 2 * i);
            }
        }
        s
    });
    Ok(Outcome::ok(stdout))
}

fn equiv(
    file1: &Path,
    file2: &Path,
    verify: Option<&Path>,
    budget: Option<u64>,
    format: OutputFormat,
) -> Result<Outcome, CliError> {
    let (p, _) = load_pair(file1)?;
    let (q, _) = load_pair(file2)?;
    require_valid(file1, &p)?;
    require_valid(file2, &q)?;

    if let Some(cert_path) = verify {
        let d: CertificateDocument = read_json(cert_path)?;
        let cert = d.to_certificate().map_err(doc_err(cert_path))?;
        let result = check_certificate(&p, &q, &cert);
        let value = json!({
            "certificate_valid": result.is_ok(),
            "error": result.as_ref().err().map(ToString::to_string),
        });
        let stdout = emit(format, &value, || match &result {
            Ok(()) => "certificate valid\n".to_string(),
            Err(e) => format!("certificate rejected: {e}\n"),
        });
        return Ok(Outcome {
            exit: if result.is_ok() { EXIT_OK } else { EXIT_NEGATIVE },
            stdout,
            diagnostics: Vec::new(),
        });
    }

    let opts = SearchOptions { branch_budget: budget };
    match decide_weak_equivalence_with(&p, &q, &opts) {
        Verdict::Equivalent(cert) => {
            let value = json!({
                "verdict": "equivalent",
                "certificate": CertificateDocument::from_certificate(&cert),
            });
            let stdout = emit(format, &value, || format!("equivalent\n{}", render::certificate(&cert)));
            Ok(Outcome::ok(stdout))
        }
        Verdict::Inequivalent { reason, guarantee } => {
            let reason_json = match &reason {
                InequivalenceReason::FingerprintMismatch(c) => {
                    json!({ "kind": "fingerprint-mismatch", "component": c })
                }
                InequivalenceReason::Exhausted {
                    isomorphisms,
                    sign_branches,
                } => json!({ "kind": "exhausted", "isomorphisms": isomorphisms, "sign_branches": sign_branches }),
            };
            let value = json!({
                "verdict": "inequivalent",
                "reason": reason_json,
                "guarantee": guarantee.to_string(),
            });
            let stdout = emit(format, &value, || {
                let why = match &reason {
                    InequivalenceReason::FingerprintMismatch(c) => format!("invariants differ: {c}"),
                    InequivalenceReason::Exhausted {
                        isomorphisms,
                        sign_branches,
                    } => format!("search exhausted: {isomorphisms} isomorphisms, {sign_branches} sign branches"),
                };
                format!("inequivalent\n{why}\nguarantee: {guarantee}\n")
            });
            Ok(Outcome {
                exit: EXIT_NEGATIVE,
                stdout,
                diagnostics: Vec::new(),
            })
        }
        Verdict::NotSupported(why) => Err(CliError::Budget(why)),
    }
}

fn cut(geomfile: &Path, plane: &str, format: OutputFormat) -> Result<Outcome, CliError> {
    let d: GeometryDocument = read_json(geomfile)?;
    let (h, xi) = d.to_polytope().map_err(doc_err(geomfile))?;
    let (c, rhs) = parse_plane(plane)?;
    let p = hyperplane_cut(&h, &xi, &c, &rhs)?;
    Ok(Outcome {
        exit: EXIT_OK,
        stdout: emit_pair(format, &p, None),
        diagnostics: construction_warnings(&p),
    })
}

fn moment_angle(file: &Path, format: OutputFormat) -> Result<Outcome, CliError> {
    let text = read_text(file)?;
    let raw: Value = parse_json(file, &text)?;
    let (k, name): (SimpleCombinatorics, Option<String>) = if raw.get("inequalities").is_some() {
        let d: GeometryDocument = parse_json(file, &text)?;
        let (h, _) = d.to_polytope().map_err(doc_err(file))?;
        (combinatorics_of(&h)?, d.name)
    } else {
        let (p, name) = load_pair(file)?;
        require_complex(file, &p)?;
        (p.combinatorics().clone(), name)
    };
    if !validate_complex(&k).is_empty() {
        return Err(CliError::InvalidPair {
            path: file.to_path_buf(),
            count: validate_complex(&k).len(),
        });
    }
    let p = moment_angle_pair(&k);
    Ok(Outcome::ok(emit_pair(
        format,
        &p,
        name.map(|n| format!("moment-angle over {n}")),
    )))
}

fn contact(vfile: &Path, format: OutputFormat) -> Result<Outcome, CliError> {
    let d: LatticeDocument = read_json(vfile)?;
    let l = d.to_polytope().map_err(doc_err(vfile))?;
    let normals = cone_normals(&l)?;
    let p = good_contact_pair(&l)?;
    let stdout = match format {
        OutputFormat::Json => to_canonical_json(&PairDocument::from_pair(&p, d.name)),
        OutputFormat::Text => {
            let mut s = render::pair(&p, d.name.as_deref());
            let _ = writeln!(s, "outward normals:");
            for (j, u) in normals.iter().enumerate() {
                let _ = writeln!(s, "  {} {}", render::facet(j), render::vector(u));
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

fn split_cmd(file: &Path, format: OutputFormat) -> Result<Outcome, CliError> {
    let (p, name) = load_pair(file)?;
    require_valid(file, &p)?;
    let s = split(&p);
    let value = json!({
        "reduced": PairDocument::from_pair(&s.reduced, name.clone()),
        "torus_factor": s.torus_factor,
        "change_of_basis": matrix_rows(&s.change_of_basis),
        "image_torsion": ints(&s.image_torsion),
    });
    let stdout = emit(format, &value, || {
        let mut out = render::pair(&s.reduced, name.as_deref());
        let tors: Vec<String> = s.image_torsion.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "split torus factor: T^{}", s.torus_factor);
        let _ = writeln!(out, "image torsion: ({})", tors.join(","));
        let _ = writeln!(out, "change of basis:");
        out.push_str(&render::matrix(&s.change_of_basis, "  "));
        out
    });
    Ok(Outcome::ok(stdout))
}
