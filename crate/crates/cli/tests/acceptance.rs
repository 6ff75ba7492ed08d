//! Acceptance criteria 1–8. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::HashSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torigid::doc::{to_canonical_json, GeometryDocument, PairDocument};
use torigid_core::charpair::{
    is_valid, moment_angle_pair, pi1_quotient_bound, product_with_torus, rank_of, split, validate_pair, HyperCharPair,
    PairViolation,
};
use torigid_core::cohomology::{
    algebra_map, dual_representatives, recover_characteristic, restrict_degree2, sr_presentation,
};
use torigid_core::complexes::{enumerate_isomorphisms, SimpleCombinatorics};
use torigid_core::corpus;
use torigid_core::geometry::{cone_normals, good_contact_pair, hyperplane_cut};
use torigid_core::linalg::{dot, is_unimodular_extendable, smith_normal_form, IntMatrix};
use torigid_core::rigidity::{
    decide_weak_equivalence, verify_certificate, InequivalenceGuarantee, InequivalenceReason, Verdict,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bits4(bits: u32) -> [i64; 4] {
    [0, 1, 2, 3].map(|i| i64::from((bits >> i) & 1))
}

fn through_json(p: &HyperCharPair) -> HyperCharPair {
    let text = to_canonical_json(&PairDocument::from_pair(p, None));
    serde_json::from_str::<PairDocument>(&text).unwrap().to_pair().unwrap()
}

fn criterion_1() -> Check {
    let fixture: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", "cube.geom.json"]
        .iter()
        .collect();
    let stored: GeometryDocument = serde_json::from_str(&std::fs::read_to_string(fixture).unwrap()).unwrap();
    ensure(
        stored
            == GeometryDocument::from_polytope(&corpus::unit_cube(), &corpus::cube_xi(0, 0, 0, 0), stored.name.clone()),
        || "cube fixture differs from the generated document".into(),
    )?;
    let half = BigRational::new(1.into(), 2.into());
    let c = vec![BigRational::zero(), BigRational::zero(), BigRational::one()];
    let mut slowest = Duration::ZERO;
    for bits in 0..16 {
        let [a, b, cc, d] = bits4(bits);
        let start = Instant::now();
        let doc = GeometryDocument::from_polytope(&corpus::unit_cube(), &corpus::cube_xi(a, b, cc, d), None);
        let doc: GeometryDocument = serde_json::from_str(&to_canonical_json(&doc)).unwrap();
        let (h, xi) = doc.to_polytope().map_err(|e| e.to_string())?;
        let cut = hyperplane_cut(&h, &xi, &c, &half).map_err(|e| e.to_string())?;
        let expected = through_json(&corpus::cut_square(a, b, cc, d));
        ensure(is_valid(&cut), || format!("{:?}: cut pair invalid", [a, b, cc, d]))?;
        for (j, label) in cut.combinatorics().facet_labels().iter().enumerate() {
            let k = expected
                .combinatorics()
                .facet_labels()
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| format!("label {label} missing"))?;
            ensure(cut.column(j) == expected.column(k), || {
                format!("{:?}: column {label} differs", [a, b, cc, d])
            })?;
        }
        match decide_weak_equivalence(&cut, &expected) {
            Verdict::Equivalent(cert) if verify_certificate(&cut, &expected, &cert) => {}
            v => return Err(format!("{:?}: verdict {}", [a, b, cc, d], v.kind())),
        }
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        ensure(elapsed < Duration::from_secs(1), || {
            format!("{:?} took {elapsed:?}", [a, b, cc, d])
        })?;
    }
    Ok(format!("16 cuts equivalent to the square pair, slowest {slowest:?}"))
}

fn criterion_2() -> Check {
    let mut count = 0;
    for params in (0..4).map(|_| -2i64..=2).multi_cartesian_product() {
        let p = corpus::cut_square(params[0], params[1], params[2], params[3]);
        ensure(is_valid(&p), || format!("{params:?} rejected"))?;
        count += 1;
    }
    let violations = validate_pair(&corpus::bad_square());
    let basis: Vec<(Vec<usize>, Vec<BigInt>)> = violations
        .iter()
        .filter_map(|v| match v {
            PairViolation::BasisCondition {
                vertex,
                invariant_factors,
            } => Some((vertex.clone(), invariant_factors.clone())),
            _ => None,
        })
        .collect();
    let want: Vec<BigInt> = vec![1.into(), 2.into()];
    ensure(basis == vec![(vec![0, 1], want.clone()), (vec![1, 2], want)], || {
        format!("perturbed square reported {basis:?}")
    })?;
    Ok(format!(
        "{count} parameter cases valid; perturbed square rejected at {{0,1}} and {{1,2}} with (1,2)"
    ))
}

fn maximal_minor_gcd(m: &IntMatrix) -> BigInt {
    let (d, t) = (m.rows(), m.cols());
    if t > d {
        return BigInt::zero();
    }
    (0..d).combinations(t).fold(BigInt::zero(), |g, rows| {
        let mut entries = Vec::new();
        for &i in &rows {
            entries.extend(m.row(i).iter().cloned());
        }
        g.gcd(&IntMatrix::from_entries(t, t, entries).unwrap().determinant())
    })
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, bound: i64) -> IntMatrix {
    let entries = (0..r * c)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect();
    IntMatrix::from_entries(r, c, entries).unwrap()
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..200 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let a = random_matrix(&mut rng, r, c, 10);
        let snf = smith_normal_form(&a);
        ensure(&(&snf.u * &a) * &snf.v == snf.d, || format!("case {case}: U·A·V != D"))?;
        ensure(snf.u.determinant().magnitude().is_one(), || {
            format!("case {case}: |det U| != 1")
        })?;
        ensure(snf.v.determinant().magnitude().is_one(), || {
            format!("case {case}: |det V| != 1")
        })?;
        let f = snf.invariant_factors();
        ensure(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])), || {
            format!("case {case}: chain broken")
        })?;
        let off_diagonal_zero = (0..r).all(|i| (0..c).all(|j| (i == j && i < f.len()) || snf.d[(i, j)].is_zero()));
        ensure(off_diagonal_zero, || format!("case {case}: D not diagonal"))?;
    }
    let mut extendable = 0;
    for case in 0..200 {
        let d = rng.gen_range(1..=6);
        let t = rng.gen_range(1..=d);
        let m = random_matrix(&mut rng, d, t, 3);
        let fast = is_unimodular_extendable(d, &m.columns()).map_err(|e| e.to_string())?;
        ensure(fast == maximal_minor_gcd(&m).is_one(), || {
            format!("column set {case}: oracle disagrees")
        })?;
        extendable += usize::from(fast);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "200 SNFs exact, 200 column sets agree with minor oracle ({extendable} extendable), {elapsed:?}"
    ))
}

fn corpus_pairs() -> Vec<(String, HyperCharPair)> {
    let mut out = vec![
        ("CP1".to_string(), corpus::cp(1)),
        ("CP2".to_string(), corpus::cp(2)),
        ("Hirzebruch 0".to_string(), corpus::hirzebruch(0)),
        ("Hirzebruch 1".to_string(), corpus::hirzebruch(1)),
        ("Hirzebruch 2".to_string(), corpus::hirzebruch(2)),
        ("moment-angle square".to_string(), corpus::moment_angle_polygon(4)),
        ("moment-angle pentagon".to_string(), corpus::moment_angle_polygon(5)),
        (
            "contact square".to_string(),
            good_contact_pair(&corpus::contact_square()).unwrap(),
        ),
    ];
    for bits in 0..16 {
        let [a, b, c, d] = bits4(bits);
        out.push((format!("square {:?}", [a, b, c, d]), corpus::cut_square(a, b, c, d)));
    }
    out
}

fn criterion_4() -> Check {
    for n in 1..=3 {
        ensure(pi1_quotient_bound(&corpus::cp(n)).is_trivial(), || {
            format!("CP{n} bound not trivial")
        })?;
    }
    for m in 3..=7 {
        let p = moment_angle_pair(&SimpleCombinatorics::polygon(m));
        ensure(pi1_quotient_bound(&p).is_trivial(), || {
            format!("{m}-gon moment-angle bound not trivial")
        })?;
    }
    let g = pi1_quotient_bound(&corpus::cut_square(0, 0, 0, 0));
    ensure(g.free_rank == 1 && g.torsion.is_empty(), || {
        format!("square pair gives {g}")
    })?;

    let mut pool: Vec<(String, HyperCharPair)> = corpus_pairs();
    pool.push(("CP1 x S1".into(), product_with_torus(&corpus::cp(1), 1)));
    pool.push(("CP2 x T2".into(), product_with_torus(&corpus::cp(2), 2)));
    pool.push((
        "segment (1,0,0),(1,2,0)".into(),
        corpus::segment(&[&[1, 0, 0], &[1, 2, 0]]),
    ));
    let deficient: Vec<&(String, HyperCharPair)> = pool.iter().filter(|(_, p)| rank_of(p) < p.torus_rank()).collect();
    ensure(deficient.len() >= 3, || {
        "corpus has too few rank-deficient pairs".into()
    })?;
    for (name, p) in &deficient {
        let s = split(p);
        let back = product_with_torus(&s.reduced, s.torus_factor);
        match decide_weak_equivalence(&back, p) {
            Verdict::Equivalent(cert) if verify_certificate(&back, p, &cert) => {}
            v => return Err(format!("{name}: split round trip gave {}", v.kind())),
        }
    }
    Ok(format!(
        "bounds trivial / Z as expected; {} rank-deficient round trips equivalent",
        deficient.len()
    ))
}

fn criterion_5() -> Check {
    let mut vertices = 0;
    for (name, p) in corpus_pairs() {
        for v in p.combinatorics().vertices() {
            let r = dual_representatives(&p, v).map_err(|e| format!("{name}: {e}"))?;
            for (row, &i) in v.iter().enumerate() {
                for (col, x) in r.representatives.iter().enumerate() {
                    let want = BigInt::from(i64::from(row == col));
                    ensure(dot(&p.column(i), x) == want, || {
                        format!("{name} vertex {v:?}: pairing not identity")
                    })?;
                }
            }
            vertices += 1;
        }
        ensure(&recover_characteristic(&sr_presentation(&p)) == p.xi(), || {
            format!("{name}: recovered vectors differ")
        })?;
    }
    Ok(format!(
        "pairing identity at {vertices} vertices; vectors recovered for {} pairs",
        corpus_pairs().len()
    ))
}

fn random_gl2(rng: &mut ChaCha8Rng) -> IntMatrix {
    loop {
        let a = random_matrix(rng, 2, 2, 3);
        if a.is_unimodular() {
            return a;
        }
    }
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cp2 = corpus::cp(2);
    let isos: Vec<Vec<usize>> = enumerate_isomorphisms(cp2.combinatorics(), cp2.combinatorics()).collect();
    ensure(isos.len() == 6, || {
        format!("{} isomorphisms of the triangle", isos.len())
    })?;
    let mut positives = 0;
    for phi in &isos {
        for _ in 0..10 {
            let a = random_gl2(&mut rng);
            let signs: Vec<i8> = (0..3).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
            let q = cp2.transformed(phi, &signs, &a);
            match decide_weak_equivalence(&cp2, &q) {
                Verdict::Equivalent(cert) if verify_certificate(&cp2, &q, &cert) => positives += 1,
                v => return Err(format!("CP2 under phi={phi:?}: {}", v.kind())),
            }
        }
    }
    match decide_weak_equivalence(&corpus::hirzebruch(0), &corpus::hirzebruch(1)) {
        Verdict::Inequivalent {
            reason:
                InequivalenceReason::Exhausted {
                    isomorphisms: 8,
                    sign_branches,
                },
            guarantee: InequivalenceGuarantee::CertifiedByRigidity,
        } if sign_branches <= 16 => {}
        v => return Err(format!("Hirzebruch 0 vs 1: {v:?}")),
    }
    let pairs = corpus_pairs();
    let mut checked = 0;
    for ((n1, p), (n2, q)) in pairs.iter().cartesian_product(pairs.iter()) {
        let f = decide_weak_equivalence(p, q);
        let b = decide_weak_equivalence(q, p);
        ensure(f.kind() == b.kind(), || format!("{n1} vs {n2}: asymmetric verdicts"))?;
        if let Verdict::Equivalent(cert) = f {
            ensure(verify_certificate(p, q, &cert), || {
                format!("{n1} vs {n2}: certificate rejected")
            })?;
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{positives} CP2 variants equivalent, Hirzebruch 0/1 certified inequivalent, {checked} ordered pairs symmetric, {elapsed:?}"
    ))
}

fn criterion_7() -> Check {
    let mut squares = 0;
    for (name, p) in corpus_pairs() {
        let t = p.torus_rank();
        for v in p.combinatorics().vertices() {
            let r = dual_representatives(&p, v).map_err(|e| format!("{name}: {e}"))?;
            for s in 0..t {
                let mut e = vec![BigInt::zero(); t];
                e[s] = BigInt::one();
                let image = algebra_map(&p, &e).map_err(|e| e.to_string())?;
                let restricted = restrict_degree2(&p, v, &image).map_err(|e| e.to_string())?;
                ensure(restricted == r.quotient_class(&e), || {
                    format!("{name} vertex {v:?}, e_{s}*")
                })?;
                squares += 1;
            }
        }
    }
    Ok(format!("{squares} restriction squares commute"))
}

fn criterion_8() -> Check {
    let l = corpus::contact_square();
    let normals = cone_normals(&l).map_err(|e| e.to_string())?;
    let got: HashSet<Vec<i64>> = normals
        .iter()
        .map(|u| u.iter().map(|x| i64::try_from(x).unwrap()).collect())
        .collect();
    let want: HashSet<Vec<i64>> = [[1, 0, -1], [-1, 0, -1], [0, 1, -1], [0, -1, -1]]
        .iter()
        .map(|u| u.to_vec())
        .collect();
    ensure(got == want, || format!("normals {got:?}"))?;
    for (f, u) in l.facets.iter().zip(&normals) {
        for (i, w) in l.vertices.iter().enumerate() {
            if !f.contains(&i) {
                ensure(dot(u, w) < BigInt::zero(), || {
                    format!("normal {u:?} not outward at vertex {i}")
                })?;
            } else {
                ensure(dot(u, w).is_zero(), || {
                    format!("normal {u:?} misses vertex {i} of its facet")
                })?;
            }
        }
    }
    let p = good_contact_pair(&l).map_err(|e| e.to_string())?;
    ensure(is_valid(&p) && p.k() == 1, || {
        "contact pair not a valid k=1 pair".into()
    })?;
    Ok("normals match, outward, valid k=1 pair".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("cube cut pipeline", criterion_1),
        ("basis condition validator", criterion_2),
        ("Smith normal form properties", criterion_3),
        ("fundamental group bound and split round trip", criterion_4),
        ("dual pairing and vector recovery", criterion_5),
        ("rigidity search", criterion_6),
        ("restriction diagram", criterion_7),
        ("good-contact construction", criterion_8),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 8 passed in {:?}", 8 - failed, start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
