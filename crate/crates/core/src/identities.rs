//! Randomized exact checks of the D-operator identities in symplectic and
//! orthogonal Lie algebras.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classical::{BilinearSpace, FormKind, MatrixAlgebra};
use crate::error::Result;
use crate::field::{Field, FieldScalar};
use crate::lie::Element;
use crate::linalg::Vector;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    /// Inputs of the first failure, as coordinate strings.
    pub first_failure: Option<String>,
}

impl IdentityOutcome {
    pub fn holds(&self) -> bool {
        self.trials > 0 && self.passed == self.trials
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityReport {
    pub kind: FormKind,
    pub dim: usize,
    pub field: String,
    pub seed: u64,
    /// Sampling domain of the symplectic suite.
    pub domain: Option<PairDomain>,
    pub outcomes: Vec<IdentityOutcome>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.outcomes.iter().all(|o| o.holds())
    }

    /// Number of identities, among the first `count`, that held on every trial.
    pub fn holding(&self, count: usize) -> usize {
        self.outcomes.iter().take(count).filter(|o| o.holds()).count()
    }

    pub fn outcome(&self, name: &str) -> Option<&IdentityOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

struct Tally {
    outcomes: Vec<IdentityOutcome>,
}

impl Tally {
    fn new(names: &[&str]) -> Tally {
        Tally {
            outcomes: names
                .iter()
                .map(|n| IdentityOutcome { name: n.to_string(), trials: 0, passed: 0, first_failure: None })
                .collect(),
        }
    }

    fn record(&mut self, idx: usize, ok: bool, inputs: impl FnOnce() -> String) {
        let o = &mut self.outcomes[idx];
        o.trials += 1;
        if ok {
            o.passed += 1;
        } else if o.first_failure.is_none() {
            o.first_failure = Some(inputs());
        }
    }
}

fn sc(field: Field, v: i64) -> FieldScalar {
    FieldScalar::from_i64(field, v)
}

fn lin(terms: &[(FieldScalar, &Element)], zero: &Element) -> Result<Element> {
    let mut acc = zero.clone();
    for (c, e) in terms {
        acc = acc.add(&e.scale(c)?)?;
    }
    Ok(acc)
}

fn describe(vs: &[(&str, &Vector)], x: Option<&Element>) -> String {
    let mut parts: Vec<String> = vs.iter().map(|(n, v)| format!("{n}=({})", v.to_strings().join(","))).collect();
    if let Some(x) = x {
        parts.push(format!("X=({})", x.coords().to_strings().join(",")));
    }
    parts.join(" ")
}

pub const SYMPLECTIC_IDENTITIES: [&str; 5] = [
    "[D_a,[D_b,X]] = B(a,Xb) D_{a,b}",
    "D_{a,b} = D_{a+b} - D_a - D_b",
    "[D_a,D_b] = -B(a,b) D_{a,b}",
    "[D_{a,b},[D_{a,b},X]] = 2B(a,Xb)D_{a,b} - 2B(Xa,a)D_b - 2B(Xb,b)D_a",
    "[D_a,[D_{a,b},X]] = 0",
];

/// Forms that hold for every input; they differ from the first and fifth lines above.
pub const SYMPLECTIC_GENERAL_FORMS: [&str; 2] = [
    "[D_a,[D_b,X]] = B(a,b) D_{a,Xb} + B(a,Xb) D_{a,b}",
    "B(a,b)=0: [D_a,[D_{a,b},X]] = B(a,Xa) D_{a,b} + 2B(a,Xb) D_a",
];

/// Which pairs `(a, b)` the symplectic identities are sampled from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairDomain {
    Any,
    /// `B(a, b) = 0`, the situation of a line of the polar space.
    Perpendicular,
}

fn random_pair(space: &BilinearSpace, domain: PairDomain, rng: &mut ChaCha8Rng) -> Result<(Vector, Vector)> {
    let field = space.field();
    let n = space.dim();
    let a = Vector::random(field, n, rng);
    loop {
        let b = Vector::random(field, n, rng);
        if domain == PairDomain::Any || space.form(&a, &b)?.is_zero() {
            return Ok((a, b));
        }
    }
}

/// The five symplectic identities on `trials` random `(a, b, X)` from `domain`,
/// followed by the two general forms.
pub fn symplectic_identities(dim: usize, field: Field, trials: usize, seed: u64, domain: PairDomain) -> Result<IdentityReport> {
    let alg = MatrixAlgebra::skew(&BilinearSpace::standard(FormKind::Alternating, dim, field)?)?;
    let space = alg.space().expect("form").clone();
    let l = alg.algebra().clone();
    let zero = l.zero();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names: Vec<&str> = SYMPLECTIC_IDENTITIES.to_vec();
    names.extend(SYMPLECTIC_GENERAL_FORMS);
    let mut tally = Tally::new(&names);
    let two = sc(field, 2);
    for _ in 0..trials {
        let (a, b) = random_pair(&space, domain, &mut rng)?;
        let x = l.random_element(&mut rng);
        let inputs = || describe(&[("a", &a), ("b", &b)], Some(&x));
        let da = alg.d_sympl_single(&a)?;
        let db = alg.d_sympl_single(&b)?;
        let dab = alg.d_sympl(&a, &b)?;
        let xa = alg.act(&x, &a)?;
        let xb = alg.act(&x, &b)?;
        let b_a_xb = space.form(&a, &xb)?;
        let b_ab = space.form(&a, &b)?;

        let first = da.bracket(&db.bracket(&x)?)?;
        tally.record(0, first == dab.scale(&b_a_xb)?, inputs);

        let rhs = alg.d_sympl_single(&a.add(&b)?)?.sub(&da)?.sub(&db)?;
        tally.record(1, dab == rhs, inputs);

        let lhs = da.bracket(&db)?;
        tally.record(2, lhs == dab.scale(&-&b_ab)?, inputs);

        let lhs = dab.bracket(&dab.bracket(&x)?)?;
        let rhs = lin(
            &[
                (&two * &b_a_xb, &dab),
                (-&(&two * &space.form(&xa, &a)?), &db),
                (-&(&two * &space.form(&xb, &b)?), &da),
            ],
            &zero,
        )?;
        tally.record(3, lhs == rhs, inputs);

        let fifth = da.bracket(&dab.bracket(&x)?)?;
        tally.record(4, fifth.is_zero(), inputs);

        let rhs = lin(&[(b_ab.clone(), &alg.d_sympl(&a, &xb)?), (b_a_xb.clone(), &dab)], &zero)?;
        tally.record(5, first == rhs, inputs);

        if b_ab.is_zero() {
            let rhs = lin(&[(space.form(&a, &xa)?, &dab), (&two * &b_a_xb, &da)], &zero)?;
            tally.record(6, fifth == rhs, inputs);
        }
    }
    Ok(IdentityReport {
        kind: FormKind::Alternating,
        dim,
        field: field.to_string(),
        seed,
        domain: Some(domain),
        outcomes: tally.outcomes,
    })
}

pub const ORTHOGONAL_IDENTITIES: [&str; 5] = [
    "[D_{a,b},X] = D_{Xb,a} - D_{Xa,b}",
    "[D_{a,b},[D_{a,b},X]] = B(a,b)(D_{a,Xb}+D_{b,Xa}) - 2B(a,Xb)D_{a,b} + B(a,a)D_{Xb,b} + B(b,b)D_{Xa,a}",
    "<a,b> singular: D_{a,b} extremal and [D_{a,b},[D_{a,b},X]] = 2B(Xa,b)D_{a,b}",
    "[D_{a,b},D_{c,d}] = B(b,c)D_{d,a} + B(b,d)D_{a,c} + B(a,d)D_{c,b} + B(a,c)D_{b,d}",
    "[D_{a,b},[D_{c,d},X]] = eight-term expansion",
];

fn random_singular_pair(space: &BilinearSpace, rng: &mut ChaCha8Rng) -> Result<(Vector, Vector)> {
    let field = space.field();
    let n = space.dim();
    loop {
        let a = Vector::random(field, n, rng);
        if a.is_zero() || !space.form(&a, &a)?.is_zero() {
            continue;
        }
        for _ in 0..200 {
            let b = Vector::random(field, n, rng);
            if space.form(&b, &b)?.is_zero() && space.form(&a, &b)?.is_zero() && !b.is_proportional(&a) && !b.is_zero() {
                return Ok((a, b));
            }
        }
    }
}

/// The displayed orthogonal identities on `trials` random inputs each.
pub fn orthogonal_identities(dim: usize, field: Field, trials: usize, seed: u64) -> Result<IdentityReport> {
    let alg = MatrixAlgebra::skew(&BilinearSpace::standard(FormKind::Symmetric, dim, field)?)?;
    let space = alg.space().expect("form").clone();
    let l = alg.algebra().clone();
    let zero = l.zero();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::new(&ORTHOGONAL_IDENTITIES);
    let b_ = |u: &Vector, v: &Vector| space.form(u, v);
    let d = |u: &Vector, v: &Vector| alg.d_orth(u, v);
    let two = sc(field, 2);
    for _ in 0..trials {
        let a = Vector::random(field, dim, &mut rng);
        let b = Vector::random(field, dim, &mut rng);
        let c = Vector::random(field, dim, &mut rng);
        let dd = Vector::random(field, dim, &mut rng);
        let x = l.random_element(&mut rng);
        let xa = alg.act(&x, &a)?;
        let xb = alg.act(&x, &b)?;
        let xc = alg.act(&x, &c)?;
        let xd = alg.act(&x, &dd)?;
        let dab = d(&a, &b)?;
        let inputs = || describe(&[("a", &a), ("b", &b), ("c", &c), ("d", &dd)], Some(&x));

        let lhs = dab.bracket(&x)?;
        tally.record(0, lhs == d(&xb, &a)?.sub(&d(&xa, &b)?)?, inputs);

        let lhs = dab.bracket(&dab.bracket(&x)?)?;
        let rhs = lin(
            &[
                (b_(&a, &b)?, &d(&a, &xb)?.add(&d(&b, &xa)?)?),
                (-&(&two * &b_(&a, &xb)?), &dab),
                (b_(&a, &a)?, &d(&xb, &b)?),
                (b_(&b, &b)?, &d(&xa, &a)?),
            ],
            &zero,
        )?;
        tally.record(1, lhs == rhs, inputs);

        let (s, t) = random_singular_pair(&space, &mut rng)?;
        let dst = d(&s, &t)?;
        let xs = alg.act(&x, &s)?;
        let lhs = dst.bracket(&dst.bracket(&x)?)?;
        let ok = lhs == dst.scale(&(&two * &b_(&xs, &t)?))? && l.is_pure_extremal(&dst)?;
        tally.record(2, ok, || describe(&[("a", &s), ("b", &t)], Some(&x)));

        let dcd = d(&c, &dd)?;
        let lhs = dab.bracket(&dcd)?;
        let rhs = lin(
            &[
                (b_(&b, &c)?, &d(&dd, &a)?),
                (b_(&b, &dd)?, &d(&a, &c)?),
                (b_(&a, &dd)?, &d(&c, &b)?),
                (b_(&a, &c)?, &d(&b, &dd)?),
            ],
            &zero,
        )?;
        tally.record(3, lhs == rhs, inputs);

        let lhs = dab.bracket(&dcd.bracket(&x)?)?;
        let rhs = lin(
            &[
                (b_(&b, &xd)?, &d(&c, &a)?),
                (-&b_(&a, &xd)?, &d(&c, &b)?),
                (-&b_(&b, &xc)?, &d(&dd, &a)?),
                (b_(&a, &xc)?, &d(&dd, &b)?),
                (b_(&b, &dd)?, &d(&xc, &a)?),
                (-&b_(&a, &dd)?, &d(&xc, &b)?),
                (-&b_(&b, &c)?, &d(&xd, &a)?),
                (b_(&a, &c)?, &d(&xd, &b)?),
            ],
            &zero,
        )?;
        tally.record(4, lhs == rhs, inputs);
    }
    Ok(IdentityReport { kind: FormKind::Symmetric, dim, field: field.to_string(), seed, domain: None, outcomes: tally.outcomes })
}
