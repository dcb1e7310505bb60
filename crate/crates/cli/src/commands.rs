use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

use extremal::cache;
use extremal::geometry::{self, Relation, SetClass};
use extremal::identities::{self, PairDomain};
use extremal::inner_ideals::{self, Regime, RowReport, ShadowContext, ShadowReport, TableRow};
use extremal::lie::JacobiCheck;
use extremal::{AlgebraKind, AlgebraSpec, Error, ExtremalPoint, Field, Model, Result};

use crate::report::{regime_of, to_json, Outcome};
use crate::{BuildArgs, DomainArg, GeometryArgs, IdealArgs, IdentitiesArgs, IdentityKind, PairArgs, RegimeArg, TablesArgs};

fn model(spec: &str) -> Result<Model> {
    spec.parse::<AlgebraSpec>()?.build()
}

pub fn build(a: &BuildArgs) -> Result<Outcome> {
    let kind: AlgebraKind = a.type_label.parse()?;
    let spec = AlgebraSpec::new(kind, Field::from_characteristic(a.characteristic)?).with_quotient(a.quotient);
    let m = spec.build()?;
    let l = m.algebra();
    let jacobi = l.verify_jacobi(JacobiCheck::default_for(l.dim()));
    let label = if a.quotient { format!("{kind}-quotient") } else { kind.to_string() };
    let dir = a.cache_dir.clone().or_else(cache::cache_dir_from_env).unwrap_or_else(|| PathBuf::from("extremal-cache"));
    let path = cache::cache_path(&dir, &label, spec.field);
    cache::write(&path, l, &label)?;
    let (header, reloaded) = cache::read(&path)?;
    let reload_identical = cache::to_text(&reloaded, &header.type_label) == cache::to_text(l, &label);
    let pass = jacobi.passed && reload_identical;
    let mut text = String::new();
    let _ = writeln!(text, "{}: dim {}", l.label(), l.dim());
    if let Some(r) = m.root_count() {
        let _ = writeln!(text, "roots: {r}");
    }
    let _ = writeln!(text, "structure constants: {}", l.structure_constants().len());
    let _ = writeln!(
        text,
        "jacobi: {} ({}, {} triples)",
        if jacobi.passed { "ok" } else { "FAILED" },
        jacobi.mode,
        jacobi.triples_checked
    );
    let _ = writeln!(text, "cache: {} (reload {})", path.display(), if reload_identical { "identical" } else { "DIFFERS" });
    Ok(Outcome {
        command: "build",
        regime: regime_of(a.characteristic),
        pass,
        text,
        result: json!({
            "algebra": spec.to_string(),
            "dim": l.dim(),
            "roots": m.root_count(),
            "structure_constants": l.structure_constants().len(),
            "jacobi": jacobi,
            "cache": path.display().to_string(),
            "ordering_hash": header.ordering,
            "reload_identical": reload_identical,
        }),
    })
}

/// One table line in report form.
#[derive(Serialize)]
struct TableEntry {
    #[serde(rename = "type")]
    type_label: String,
    class: String,
    representative: String,
    characteristic: u32,
    #[serde(rename = "dim_adL_computed")]
    dim_ad: usize,
    #[serde(rename = "dim_ad2L_computed")]
    dim_ad2: usize,
    commutative: bool,
    #[serde(rename = "expected_dim_adL")]
    expected_dim_ad: usize,
    #[serde(rename = "expected_dim_ad2L")]
    expected_dim_ad2: usize,
    expected_flag: String,
    #[serde(rename = "match")]
    matched: bool,
    /// Which model matched: `full`, `quotient` or `none`.
    matched_in: &'static str,
    quotient_variant: Option<extremal::inner_ideals::VariantReport>,
    closure_dim: usize,
    closure_is_image: bool,
    pair_relation: Option<Relation>,
}

fn entry(r: &RowReport) -> TableEntry {
    let matched_in = if !r.matched() {
        "none"
    } else if r.match_full {
        "full"
    } else {
        "quotient"
    };
    TableEntry {
        type_label: r.algebra.clone(),
        class: r.class.clone(),
        representative: r.representative.clone(),
        characteristic: r.characteristic,
        dim_ad: r.full.dim_ad,
        dim_ad2: r.full.dim_ad2,
        commutative: r.full.image_commutative,
        expected_dim_ad: r.expected_dim_ad,
        expected_dim_ad2: r.expected_dim_ad2,
        expected_flag: r.expected_flag.clone(),
        matched: r.matched(),
        matched_in,
        quotient_variant: r.quotient.clone(),
        closure_dim: r.full.closure_dim,
        closure_is_image: r.full.closure_is_image,
        pair_relation: r.pair_relation,
    }
}

pub fn tables(a: &TablesArgs) -> Result<Outcome> {
    let regime = match a.regime {
        RegimeArg::Generic => Regime::Generic,
        RegimeArg::Three => Regime::Three,
    };
    for &p in &a.chars {
        Field::prime(p)?;
        let fits = match regime {
            Regime::Generic => p > 3,
            Regime::Three => p == 3,
        };
        if !fits {
            return Err(Error::Precondition(format!("characteristic {p} does not belong to the {} regime", regime_label(regime))));
        }
    }
    let mut rows: Vec<TableRow> = inner_ideals::table(regime).to_vec();
    if regime == Regime::Three {
        rows.push(inner_ideals::E6_A2_SQUARED_ALTERNATIVE);
    }
    let mut reports = Vec::new();
    for &p in &a.chars {
        for row in &rows {
            reports.push(inner_ideals::evaluate_row_with(row, p, !a.no_shortcut)?);
        }
    }
    reports.sort_by(|x, y| (&x.algebra, &x.class, x.characteristic).cmp(&(&y.algebra, &y.class, y.characteristic)));
    let matched = reports.iter().filter(|r| r.matched()).count();
    let mut text = inner_ideals::render_table(&reports);
    let _ = writeln!(text, "{matched}/{} rows match ({} table rows x {} characteristic(s))", reports.len(), rows.len(), a.chars.len());
    let entries: Vec<TableEntry> = reports.iter().map(entry).collect();
    Ok(Outcome {
        command: "tables",
        regime: regime_label(regime).to_string(),
        pass: matched == reports.len(),
        text,
        result: json!({
            "rows": entries,
            "matched": matched,
            "total": reports.len(),
            "shortcut": !a.no_shortcut,
        }),
    })
}

fn regime_label(r: Regime) -> &'static str {
    match r {
        Regime::Generic => "p>3",
        Regime::Three => "p=3",
    }
}

fn extremal_point(m: &Model, text: &str, role: &str) -> Result<ExtremalPoint> {
    let x = m.parse_element(text)?;
    ExtremalPoint::new(&x).map_err(|e| match e {
        Error::NotExtremal => Error::Precondition(format!("{role} = {text} is not a pure extremal element")),
        other => other,
    })
}

pub fn pair(a: &PairArgs) -> Result<Outcome> {
    let m = model(&a.algebra)?;
    let x = extremal_point(&m, &a.x, "x")?;
    let y = extremal_point(&m, &a.y, "y")?;
    let rel = geometry::classify_pair(&x, &y)?;
    let expected = match &a.expect {
        Some(s) => Some(
            Relation::ALL
                .into_iter()
                .find(|r| r.name().eq_ignore_ascii_case(s) || format!("{r:?}").eq_ignore_ascii_case(s))
                .ok_or_else(|| Error::Parse(format!("`{s}`: unknown relation")))?,
        ),
        None => None,
    };
    let pass = expected.is_none_or(|e| e == rel.relation);
    let mut text = format!("{:?}\n", rel.relation);
    if let Some(b) = &rel.bracket {
        let _ = writeln!(text, "[x,y] = {}", b.display());
    }
    if let Some(g) = &rel.g {
        let _ = writeln!(text, "g(x,y) = {g}");
    }
    if rel.anomaly {
        text.push_str("note: g(x,y) = 0 but x, y span an sl2\n");
    }
    Ok(Outcome {
        command: "pair",
        regime: regime_of(m.algebra().field().characteristic()),
        pass,
        text,
        result: json!({
            "x": x.element().display(),
            "y": y.element().display(),
            "relation": rel.relation,
            "bracket": rel.bracket.as_ref().map(|b| b.display()),
            "g": rel.g.as_ref().map(|g| g.to_string()),
            "anomaly": rel.anomaly,
            "expected": expected,
        }),
    })
}

fn classification(proper: bool, zero: bool, shadow: &std::result::Result<ShadowReport, String>) -> String {
    if zero {
        return "zero".into();
    }
    if !proper {
        return "whole algebra".into();
    }
    match shadow {
        Ok(s) => match &s.class {
            SetClass::Point => "point-type shadow".into(),
            SetClass::Singular { rank } => format!("singular-subspace-type shadow (rank {rank})"),
            SetClass::Symplecton => "symplecton-type shadow".into(),
            SetClass::StrongParapolar => "strong-parapolar-type shadow".into(),
            SetClass::Other { failed } => format!("unclassified ({failed})"),
        },
        Err(why) => format!("not classified ({why})"),
    }
}

pub fn ideal(a: &IdealArgs, seed: u64) -> Result<Outcome> {
    let m = model(&a.algebra)?;
    let l = m.algebra();
    let gens = a.generators.iter().map(|g| m.parse_element(g)).collect::<Result<Vec<_>>>()?;
    let id = inner_ideals::inner_closure_with(&gens, !a.no_shortcut)?;
    let verified = id.verify()?;
    let zero = id.dim() == 0;
    let benkart = if id.is_proper() { Some(inner_ideals::benkart_check(&id, a.samples, seed)?) } else { None };
    let benkart_ok = benkart.as_ref().is_none_or(|b| b.precondition.is_some() || b.holds);
    let shadow: std::result::Result<ShadowReport, String> = if a.no_shadow {
        Err("scan disabled".into())
    } else if !id.is_proper() {
        Err("ideal is not proper".into())
    } else if l.field() == Field::Rational {
        Err("needs a finite field".into())
    } else {
        match ShadowContext::new(l, 200_000).and_then(|ctx| inner_ideals::shadow_reconstruction(&id, &ctx)) {
            Ok(s) => Ok(s),
            Err(e @ (Error::Infeasible(_) | Error::Truncated(_))) => Err(e.to_string()),
            Err(e) => return Err(e),
        }
    };
    let class = classification(id.is_proper(), zero, &shadow);
    let dim_ok = a.expect_dim.is_none_or(|d| d == id.dim());
    let pass = verified && benkart_ok && dim_ok;
    let mut text = String::new();
    let _ = writeln!(text, "inner ideal of dim {} in {} (dim {})", id.dim(), l.label(), l.dim());
    let _ = writeln!(text, "commutative: {}", id.is_commutative());
    let _ = writeln!(
        text,
        "closure: {} passes{}",
        id.provenance().passes,
        if id.provenance().shortcut_used { ", stopped at L by the Benkart shortcut" } else { "" }
    );
    if let Some(b) = &benkart {
        let verdict = match (&b.precondition, b.holds) {
            (Some(p), _) => format!("not applicable ({p})"),
            (None, true) => "holds".into(),
            (None, false) => "FAILS".into(),
        };
        let _ = writeln!(text, "benkart: {verdict} ({} elements, {} of ad-index 3)", b.sampled, b.index_three);
    }
    if let Ok(s) = &shadow {
        let _ = writeln!(text, "extremal points in P(I): {} (span I: {})", s.points, s.spans);
    }
    let _ = writeln!(text, "classification: {class}");
    if !dim_ok {
        let _ = writeln!(text, "MISMATCH: expected dim {}", a.expect_dim.unwrap_or_default());
    }
    Ok(Outcome {
        command: "ideal",
        regime: regime_of(l.field().characteristic()),
        pass,
        text,
        result: json!({
            "dim": id.dim(),
            "proper": id.is_proper(),
            "commutative": id.is_commutative(),
            "verified_inner": verified,
            "spanned_by_extremals": id.spanned_by_extremals(),
            "provenance": id.provenance(),
            "basis": id.basis().iter().map(|b| b.display()).collect::<Vec<_>>(),
            "benkart": benkart,
            "shadow": shadow.as_ref().ok(),
            "classification": class,
        }),
    })
}

pub fn geometry(a: &GeometryArgs) -> Result<Outcome> {
    let m = model(&a.algebra)?;
    let l = m.algebra();
    let pts = geometry::enumerate_extremal_points(l, &[], a.cap)?;
    let mut text = format!("{} extremal points ({:?})\n", pts.len(), pts.coverage());
    if pts.len() > geometry::MAX_GEOMETRY_POINTS {
        let _ = writeln!(text, "too many points for pairwise relations (limit {})", geometry::MAX_GEOMETRY_POINTS);
        return Ok(Outcome {
            command: "geometry",
            regime: regime_of(l.field().characteristic()),
            pass: true,
            text,
            result: json!({ "points": pts.len(), "coverage": pts.coverage() }),
        });
    }
    let g = geometry::build_space(&pts)?;
    let export = g.export(a.relations)?;
    let counts = g.relation_counts();
    let _ = writeln!(text, "lines exist: {}", g.lines_exist());
    for (r, c) in Relation::ALL.iter().zip(counts) {
        let _ = writeln!(text, "  {:<18} {c}", format!("{r:?}"));
    }
    let ax = &export.axioms;
    let _ = writeln!(
        text,
        "{} space: {} points, {} {}",
        if g.lines_exist() { "line" } else { "symplecton" },
        ax.points,
        ax.lines,
        if g.lines_exist() { "lines" } else { "symplecta" }
    );
    let _ = writeln!(
        text,
        "connected {} partial-linear {} gamma {} polar {} thick {} non-degenerate {} diameter {:?} singular rank {:?}",
        ax.connected, ax.partial_linear, ax.gamma, ax.polar, ax.thick, ax.non_degenerate, ax.diameter, ax.singular_rank
    );
    if let Some(path) = &a.export {
        let body = serde_json::to_string(&export).expect("export serializes") + "\n";
        std::fs::write(path, body).map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))?;
        let _ = writeln!(text, "exported to {}", path.display());
    }
    let pass = g.anomalies().is_empty();
    Ok(Outcome {
        command: "geometry",
        regime: regime_of(l.field().characteristic()),
        pass,
        text,
        result: json!({
            "points": pts.len(),
            "coverage": pts.coverage(),
            "lines_exist": g.lines_exist(),
            "relation_counts": Relation::ALL.iter().zip(counts).map(|(r, c)| (r.name(), c)).collect::<std::collections::BTreeMap<_, _>>(),
            "lines": g.lines().len(),
            "partial_lines": g.partial_lines(),
            "anomalies": g.anomalies().len(),
            "axioms": to_json(ax),
        }),
    })
}

pub fn identities(a: &IdentitiesArgs, seed: u64) -> Result<Outcome> {
    let field = Field::from_characteristic(a.characteristic)?;
    let (report, displayed) = match a.kind {
        IdentityKind::Sympl => {
            let domain = match a.domain {
                DomainArg::Any => PairDomain::Any,
                DomainArg::Perp => PairDomain::Perpendicular,
            };
            (identities::symplectic_identities(a.dim, field, a.trials, seed, domain)?, identities::SYMPLECTIC_IDENTITIES.len())
        }
        IdentityKind::Orth => (identities::orthogonal_identities(a.dim, field, a.trials, seed)?, identities::ORTHOGONAL_IDENTITIES.len()),
    };
    let holding = report.holding(displayed);
    let mut text = String::new();
    for (i, o) in report.outcomes.iter().enumerate() {
        let tag = if i < displayed { "" } else { " (general form)" };
        let _ = writeln!(text, "{:>4}/{:<4} {}{tag}", o.passed, o.trials, o.name);
        if let Some(f) = &o.first_failure {
            let _ = writeln!(text, "          first failure: {f}");
        }
    }
    let _ = writeln!(text, "{holding}/{displayed} identities pass");
    Ok(Outcome {
        command: "identities",
        regime: regime_of(a.characteristic),
        pass: holding == displayed,
        text,
        result: json!({ "holding": holding, "displayed": displayed, "report": report }),
    })
}
