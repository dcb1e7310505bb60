//! Acceptance run: one PASS/FAIL line per criterion, with the evidence below it.
//!
//! Runs as a plain binary (`harness = false`) so the lines reach the terminal.
//! A FAIL is reported, not asserted; several criteria encode printed values
//! that exact computation does not reproduce, and the details say why.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use extremal::chevalley::ChevalleyAlgebra;
use extremal::classical::MatrixAlgebra;
use extremal::geometry::{self, ExtremalSampler, Relation, SetClass};
use extremal::identities::{self, PairDomain};
use extremal::inner_ideals::{self, Regime, ShadowContext, CHAR3_TABLE, E6_A2_SQUARED_ALTERNATIVE, GENERIC_TABLE};
use extremal::{Element, ExtremalPoint, Field, LieAlgebra, Result};

struct Verdict {
    pass: bool,
    details: Vec<String>,
}

fn gf(p: u32) -> Field {
    Field::prime(p).expect("odd prime")
}

fn table_regime(regime: Regime, chars: &[u32]) -> Result<Verdict> {
    let rows = inner_ideals::table(regime);
    let mut details = Vec::new();
    let mut pass = true;
    for &p in chars {
        let mut matched = 0;
        for row in rows {
            let r = inner_ideals::table_row_check(row, p)?;
            if r.matched() {
                matched += 1;
            } else {
                pass = false;
            }
            let mut line = format!(
                "p={p} {} {}: computed {}/{} {}, expected {}/{} {}",
                r.algebra,
                r.class,
                r.full.dim_ad,
                r.full.dim_ad2,
                if r.full.image_commutative { "comm" } else { "nc" },
                r.expected_dim_ad,
                r.expected_dim_ad2,
                r.expected_flag,
            );
            if let Some(q) = &r.quotient {
                line.push_str(&format!(" [L/Z: {}/{}]", q.dim_ad, q.dim_ad2));
            }
            line.push_str(if r.matched() {
                if r.match_full { " match" } else { " match in L/Z" }
            } else {
                " MISMATCH"
            });
            details.push(line);
        }
        details.push(format!("p={p}: {matched}/{} printed rows match", rows.len()));
    }
    Ok(Verdict { pass, details })
}

fn criterion_1() -> Result<Verdict> {
    let mut v = table_regime(Regime::Generic, &[5, 7])?;
    v.details.push(format!("the table prints {} data rows (the criterion text says 13); all are encoded", GENERIC_TABLE.len()));
    Ok(v)
}

fn criterion_2() -> Result<Verdict> {
    let mut v = table_regime(Regime::Three, &[3])?;
    let alt = inner_ideals::table_row_check(&E6_A2_SQUARED_ALTERNATIVE, 3)?;
    v.details.push(format!(
        "E6 A2^2 with representative {}: {}/{} ({})",
        alt.representative,
        alt.full.dim_ad,
        alt.full.dim_ad2,
        if alt.matched() { "matches the printed row" } else { "differs" }
    ));
    v.details.push(format!("the table prints {} data rows (the criterion text says 10); all are encoded", CHAR3_TABLE.len()));
    Ok(v)
}

fn criterion_3() -> Result<Verdict> {
    let a2sq = inner_ideals::find_row("E6", "A2^2")?;
    let a2sq_a1 = inner_ideals::find_row("E6", "A2^2A1")?;
    let mut details = Vec::new();
    let mut got = Vec::new();
    for (row, expect5, expect3) in [(a2sq, 48, 47), (a2sq_a1, 54, 51)] {
        let r5 = inner_ideals::evaluate_row(&row, 5)?;
        let r3 = inner_ideals::evaluate_row(&row, 3)?;
        details.push(format!(
            "E6 {} ({}): p=5 dim ad_xL {} (expected {expect5}), p=3 {} (expected {expect3})",
            row.class, row.representative_label(), r5.full.dim_ad, r3.full.dim_ad
        ));
        got.push(r5.full.dim_ad == expect5 && r3.full.dim_ad == expect3);
    }
    let alt5 = inner_ideals::evaluate_row(&E6_A2_SQUARED_ALTERNATIVE, 5)?;
    let alt3 = inner_ideals::evaluate_row(&E6_A2_SQUARED_ALTERNATIVE, 3)?;
    details.push(format!(
        "E6 A2^2 via {}: p=5 {}, p=3 {}",
        E6_A2_SQUARED_ALTERNATIVE.representative_label(),
        alt5.full.dim_ad,
        alt3.full.dim_ad
    ));
    Ok(Verdict { pass: got.iter().all(|&b| b), details })
}

fn criterion_4() -> Result<Verdict> {
    let mut details = Vec::new();
    let mut pass = true;
    for p in [5, 7] {
        let e = inner_ideals::f4_worked_example(p)?;
        details.push(format!(
            "p={p}: dim Y {}, [Y,Y]=0 {}, [Y,[Y,L]] = ad_x^2 L {}, closure = span Y {}, difference 2X {}",
            e.dim_y, e.y_commutative, e.yyl_is_image, e.closure_is_span, e.difference_is_2x
        ));
        details.push(format!(
            "p={p}: printed combinations extremal (+,-) = ({}, {}), any nonzero coefficients {}; partner-root reading {:?}",
            e.printed_plus_extremal, e.printed_minus_extremal, e.printed_any_coefficients, e.paired_sign
        ));
        pass &= e.holds();
    }
    Ok(Verdict { pass, details })
}

fn criterion_5() -> Result<Verdict> {
    let mut details = Vec::new();
    let mut pass = true;
    for p in [3, 5] {
        for dim in [4, 6, 8] {
            for domain in [PairDomain::Any, PairDomain::Perpendicular] {
                let r = identities::symplectic_identities(dim, gf(p), 200, 0xacce, domain)?;
                let shown = identities::SYMPLECTIC_IDENTITIES.len();
                let general = r.outcomes[shown..].iter().all(|o| o.holds());
                if domain == PairDomain::Any {
                    pass &= r.holding(shown) == shown;
                }
                details.push(format!(
                    "sympl GF({p}) dim {dim} {domain:?}: {}/{shown} displayed identities hold, general forms {}",
                    r.holding(shown),
                    if general { "hold" } else { "FAIL" }
                ));
            }
        }
        for dim in 4..=8 {
            let r = identities::orthogonal_identities(dim, gf(p), 200, 0xacce)?;
            pass &= r.all_hold();
            details.push(format!("orth GF({p}) dim {dim}: {}/{} hold", r.holding(r.outcomes.len()), r.outcomes.len()));
        }
    }
    Ok(Verdict { pass, details })
}

/// A relation class of two extremal points, with a sampled representative pair.
fn sample_pairs(l: &LieAlgebra, wanted: &[Relation], tries: usize, seed: u64) -> Result<BTreeMap<Relation, (ExtremalPoint, ExtremalPoint)>> {
    let sampler = ExtremalSampler::new(l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = BTreeMap::new();
    for i in 0..tries {
        if wanted.iter().all(|r| found.contains_key(r)) {
            break;
        }
        let x = sampler.sample(8, &mut rng);
        let y = if i % 2 == 0 { sampler.perturb(&x, 1, &mut rng)? } else { sampler.sample(8, &mut rng) };
        let rel = geometry::classify_pair(&x, &y)?.relation;
        if wanted.contains(&rel) {
            found.entry(rel).or_insert((x, y));
        }
    }
    Ok(found)
}

/// Relations from `missing` that do occur among the extremal points of `l`, by full enumeration.
fn occurring(l: &LieAlgebra, missing: &[Relation]) -> Result<Vec<Relation>> {
    let points = geometry::enumerate_extremal_points(l, &[], 40_000)?;
    let counts = geometry::build_space(&points)?.relation_counts();
    Ok(missing.iter().copied().filter(|r| counts[r.code() as usize] > 0).collect())
}

fn classical(name: &str, p: u32) -> Result<MatrixAlgebra> {
    let f = gf(p);
    match name {
        "sl3" => MatrixAlgebra::sl(3, f),
        "sl4" => MatrixAlgebra::sl(4, f),
        "sp4" => MatrixAlgebra::symplectic(4, f),
        "so7" => MatrixAlgebra::orthogonal(7, f),
        "so8" => MatrixAlgebra::orthogonal(8, f),
        _ => unreachable!("fixed list"),
    }
}

fn benkart_line(label: &str, gens: &[Element]) -> Result<(bool, String)> {
    let id = inner_ideals::inner_closure(gens)?;
    if !id.is_proper() {
        return Ok((true, format!("{label}: closure is L")));
    }
    let r = if id.dim() <= 8 { inner_ideals::benkart_check_exhaustive(&id)? } else { inner_ideals::benkart_check(&id, 500, 0xbe)? };
    Ok((
        r.holds,
        format!(
            "{label}: dim {}, [I,I]=0 {}, ad-index 3 on {}/{} ({})",
            id.dim(),
            r.commutative,
            r.index_three,
            r.sampled,
            if r.exhaustive { "exhaustive" } else { "sampled" }
        ),
    ))
}

fn criterion_6() -> Result<Verdict> {
    let mut details = Vec::new();
    let mut pass = true;
    let wanted = [Relation::StronglyCommuting, Relation::Polar];
    for p in [3, 5, 7] {
        for name in ["sl3", "sl4", "sp4", "so7"] {
            let m = classical(name, p)?;
            let l = m.algebra();
            let x = ExtremalSampler::new(l)?.sample(8, &mut ChaCha8Rng::seed_from_u64(7));
            let (ok, line) = benkart_line(&format!("{name} GF({p}) single"), &[x.element().clone()])?;
            pass &= ok;
            details.push(line);
            let pairs = sample_pairs(l, &wanted, 400, 11)?;
            for rel in wanted {
                match pairs.get(&rel) {
                    Some((x, y)) => {
                        let (ok, line) = benkart_line(&format!("{name} GF({p}) {rel:?} pair"), &[x.element().clone(), y.element().clone()])?;
                        pass &= ok;
                        details.push(line);
                    }
                    None => {
                        let present = !occurring(l, &[rel])?.is_empty();
                        pass &= !present;
                        details.push(format!(
                            "{name} GF({p}): no {rel:?} pair sampled; {}",
                            if present { "the relation occurs, sampling is incomplete" } else { "enumeration shows the relation does not occur" }
                        ));
                    }
                }
            }
        }
    }
    for row in GENERIC_TABLE.iter().filter(|r| r.flag.commutative()) {
        let ch = ChevalleyAlgebra::from_label(row.algebra, gf(5))?;
        let x = ch.simple_root_sum(row.representative)?;
        let (ok, line) = benkart_line(&format!("{} {} GF(5)", row.algebra, row.class), &[x])?;
        pass &= ok;
        details.push(line);
    }
    Ok(Verdict { pass, details })
}

/// All points of `P(L)` whose representatives are pure extremal, found by scanning.
fn brute_force_count(l: &LieAlgebra) -> Result<usize> {
    let p = l.field().characteristic() as u64;
    let n = l.dim();
    let mut count = 0;
    for lead in 0..n {
        let tail = n - lead - 1;
        for code in 0..p.pow(tail as u32) {
            let mut c = vec![0i64; n];
            c[lead] = 1;
            let mut k = code;
            for slot in c[lead + 1..].iter_mut() {
                *slot = (k % p) as i64;
                k /= p;
            }
            if l.is_pure_extremal(&l.element_from_i64(&c)?)? {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn criterion_7() -> Result<Verdict> {
    let mut details = Vec::new();
    let mut pass = true;
    for (name, alg, expected) in [
        ("sl2 GF(5)", MatrixAlgebra::sl(2, gf(5))?, 6),
        ("sl3 GF(5)", MatrixAlgebra::sl(3, gf(5))?, 186),
        ("sp4 GF(3)", MatrixAlgebra::symplectic(4, gf(3))?, 40),
    ] {
        let l = alg.algebra();
        let orbit = geometry::enumerate_extremal_points(l, &[], 1_000_000)?.len();
        let scan = brute_force_count(l)?;
        pass &= orbit == expected && scan == expected;
        details.push(format!("{name}: orbit enumeration {orbit}, projective scan {scan}, expected {expected}"));
    }
    Ok(Verdict { pass, details })
}

fn expected_class(rel: Relation) -> Option<SetClass> {
    match rel {
        Relation::SamePoint => Some(SetClass::Point),
        Relation::StronglyCommuting => Some(SetClass::Singular { rank: 1 }),
        Relation::Polar => Some(SetClass::Symplecton),
        Relation::Special | Relation::Hyperbolic => None,
    }
}

fn criterion_8() -> Result<Verdict> {
    let mut details = Vec::new();
    let mut pass = true;
    let wanted = [Relation::StronglyCommuting, Relation::Polar, Relation::Special, Relation::Hyperbolic];
    for p in [3, 5] {
        for name in ["sl3", "sl4", "sp4", "so7", "so8"] {
            let m = classical(name, p)?;
            let l = m.algebra();
            let ctx = ShadowContext::new(l, 200_000)?;
            let sampler = ExtremalSampler::new(l)?;
            let mut rng = ChaCha8Rng::seed_from_u64(0x5a + p as u64);
            let mut cases: Vec<(Relation, Vec<Element>)> = Vec::new();
            for _ in 0..12 {
                let x = sampler.sample(8, &mut rng);
                cases.push((Relation::SamePoint, vec![x.element().clone()]));
            }
            for seed in 3u64..15 {
                for (rel, (x, y)) in sample_pairs(l, &wanted, 400, seed + p as u64)? {
                    cases.push((rel, vec![x.element().clone(), y.element().clone()]));
                }
            }
            let mut tally: BTreeMap<String, usize> = BTreeMap::new();
            let mut ok_all = true;
            for (rel, gens) in &cases {
                let id = inner_ideals::inner_closure(gens)?;
                let ok = match expected_class(*rel) {
                    None => !id.is_proper(),
                    Some(class) => {
                        let r = inner_ideals::shadow_reconstruction(&id, &ctx)?;
                        r.spans && r.class == class
                    }
                };
                ok_all &= ok;
                *tally.entry(format!("{rel:?}{}", if ok { "" } else { " WRONG" })).or_default() += 1;
            }
            let missing: Vec<Relation> = wanted.iter().copied().filter(|r| !cases.iter().any(|(c, _)| c == r)).collect();
            let present = if missing.is_empty() { Vec::new() } else { occurring(l, &missing)? };
            pass &= ok_all && present.is_empty();
            let note = match (missing.is_empty(), present.is_empty()) {
                (true, _) => String::new(),
                (false, true) => format!("; {missing:?} do not occur (full enumeration)"),
                (false, false) => format!("; {present:?} occur but were not sampled"),
            };
            details.push(format!("{name} GF({p}): {} cases {:?}{note}", cases.len(), tally));
        }
    }
    details.push("expected: single point -> point, strongly commuting -> singular line, polar -> symplecton, special/hyperbolic -> L".into());
    Ok(Verdict { pass, details })
}

fn criterion_9() -> Result<Verdict> {
    let mut details = Vec::new();
    let mut pass = true;
    for p in [5, 7] {
        for row in GENERIC_TABLE.iter().filter(|r| r.flag.commutative()) {
            let ch = ChevalleyAlgebra::from_label(row.algebra, gf(p))?;
            let x = ch.simple_root_sum(row.representative)?;
            let f = inner_ideals::fernandez_conditions(&x, 50, 0xfe)?;
            let v = inner_ideals::analyse_nilpotent(&x, true)?;
            let ok = f.precondition.is_none() && f.condition_i && f.condition_ii && v.closure_is_image;
            pass &= ok;
            details.push(format!(
                "p={p} {} {} ({}): (i) {}, (ii) {} on {} samples, closure = ad_x^2 L {}",
                row.algebra,
                row.class,
                row.flag.label(),
                f.condition_i,
                f.condition_ii,
                f.samples,
                v.closure_is_image
            ));
        }
    }
    Ok(Verdict { pass, details })
}

fn main() {
    let criteria: [(&str, fn() -> Result<Verdict>); 9] = [
        ("table reproduction, p>3", criterion_1),
        ("table reproduction, p=3", criterion_2),
        ("cross-characteristic E6 deltas", criterion_3),
        ("F4 worked example", criterion_4),
        ("D-operator identity suites", criterion_5),
        ("Benkart property", criterion_6),
        ("enumeration vs projective scan", criterion_7),
        ("shadow reconstruction", criterion_8),
        ("Fernandez conditions", criterion_9),
    ];
    let mut passed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (pass, details) = match run() {
            Ok(v) => (v.pass, v.details),
            Err(e) => (false, vec![format!("error: {e}")]),
        };
        passed += usize::from(pass);
        println!("criterion {} ({name}): {} [{:.1}s]", i + 1, if pass { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
        for d in details {
            println!("    {d}");
        }
    }
    println!("acceptance: {passed}/{} criteria pass", criteria.len());
}
