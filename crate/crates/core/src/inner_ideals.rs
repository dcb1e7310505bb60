//! Inner ideals: closure, verification, commutativity and the conditions
//! that make `ad_a² L` an inner ideal, plus the nilpotent-class tables of
//! the exceptional types.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chevalley::ChevalleyAlgebra;
use crate::dual::{dual, Backend, Dual};
use crate::error::{Error, Result};
use crate::field::{Arith, Field, ModArith};
use crate::geometry::{self, ExtremalGeometry, PointSet, Relation, SetClass};
use crate::lie::{Element, ExtremalPoint, LieAlgebra, Tensor};
use crate::linalg::kernels::{self, Echelon};
use crate::linalg::{ExactMatrix, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Tristate {
    Yes,
    No,
    Unknown,
}

/// How an inner ideal was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub generators: Vec<String>,
    /// Closure passes run.
    pub passes: usize,
    /// The closure stopped at `L` because the partial ideal was not commutative.
    pub shortcut_used: bool,
    pub shortcut_enabled: bool,
}

#[derive(Clone, Debug)]
pub struct InnerIdeal {
    algebra: LieAlgebra,
    subspace: Subspace,
    commutative: bool,
    spanned_by_extremals: Tristate,
    provenance: Provenance,
}

impl InnerIdeal {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn is_proper(&self) -> bool {
        !self.subspace.is_zero() && !self.subspace.is_full()
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn spanned_by_extremals(&self) -> Tristate {
        self.spanned_by_extremals
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn basis(&self) -> Vec<Element> {
        self.subspace.basis().into_iter().map(|v| self.algebra.element(v).expect("same algebra")).collect()
    }

    pub fn contains(&self, x: &Element) -> Result<bool> {
        if x.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        self.subspace.contains(x.coords())
    }

    /// Re-check `[I,[I,L]] ⊆ I`.
    pub fn verify(&self) -> Result<bool> {
        is_inner_ideal(&self.algebra, &self.subspace)
    }
}

fn payload<'a, A: Backend>(_ar: &A, v: &'a Vector) -> &'a [A::E] {
    A::unwrap_vec(&v.0).expect("vector lives in the algebra's field")
}

fn echelon_payload<'a, A: Backend>(_ar: &A, s: &'a Subspace) -> &'a Echelon<A> {
    A::unwrap_echelon(&s.data).expect("subspace lives in the algebra's field")
}

fn check_subspace(l: &LieAlgebra, s: &Subspace) -> Result<()> {
    if s.ambient_dim() != l.dim() {
        return Err(Error::DimensionMismatch { expected: l.dim(), found: s.ambient_dim() });
    }
    if s.field() != l.field() {
        return Err(Error::CharacteristicMismatch { left: l.field(), right: s.field() });
    }
    Ok(())
}

struct Closure<A: Arith> {
    span: Echelon<A>,
    passes: usize,
    shortcut_used: bool,
    commutative: bool,
}

fn closure_core<A: Arith>(ar: &A, t: &Tensor<A>, seeds: Vec<Vec<A::E>>, shortcut: bool) -> Closure<A> {
    let n = t.dim;
    let mut span = Echelon::new(n);
    let mut gens: Vec<Vec<A::E>> = Vec::new();
    for s in seeds {
        if span.insert(ar, s.clone()) {
            gens.push(s);
        }
    }
    let mut cols: Vec<Vec<Vec<A::E>>> = Vec::new();
    let (mut done, mut passes, mut commutative) = (0, 0, true);
    while done < gens.len() && span.dim() < n {
        let len = gens.len();
        if commutative {
            commutative = (done..len).all(|i| (0..i).all(|j| kernels::is_zero(ar, &t.bracket(ar, &gens[i], &gens[j]))));
        }
        if !commutative && shortcut {
            return Closure { span: full_echelon(ar, n), passes, shortcut_used: true, commutative: false };
        }
        passes += 1;
        for g in &gens[done..len] {
            cols.push((0..n).map(|k| t.bracket_basis(ar, g, k)).collect());
        }
        let mut fresh = Vec::new();
        'pairs: for i in 0..len {
            for j in 0..len {
                if i < done && j < done {
                    continue;
                }
                for col in &cols[j] {
                    if kernels::is_zero(ar, col) {
                        continue;
                    }
                    let w = t.bracket(ar, &gens[i], col);
                    if !kernels::is_zero(ar, &w) && span.insert(ar, w.clone()) {
                        fresh.push(w);
                        if span.dim() == n {
                            break 'pairs;
                        }
                    }
                }
            }
        }
        done = len;
        gens.extend(fresh);
    }
    if span.dim() == n {
        commutative = t.nnz() == 0;
    }
    Closure { span, passes, shortcut_used: false, commutative }
}

fn full_echelon<A: Arith>(ar: &A, n: usize) -> Echelon<A> {
    Echelon::from_rows(
        ar,
        n,
        (0..n).map(|i| {
            let mut v = vec![ar.zero(); n];
            v[i] = ar.one();
            v
        }),
    )
}

/// Least inner ideal containing `ys`, stopping at `L` as soon as the partial
/// ideal is not commutative when `L` is simple and extremal-generated.
pub fn inner_closure(ys: &[Element]) -> Result<InnerIdeal> {
    inner_closure_with(ys, true)
}

/// [`inner_closure`] with the early stop at `L` switched on or off.
pub fn inner_closure_with(ys: &[Element], shortcut: bool) -> Result<InnerIdeal> {
    let first = ys.first().ok_or_else(|| Error::Precondition("empty generating set".into()))?;
    let l = first.algebra().clone();
    if ys.iter().any(|y| y.algebra() != &l) {
        return Err(Error::AlgebraMismatch);
    }
    let shortcut = shortcut && l.is_simple_extremal_generated();
    let (data, passes, shortcut_used, commutative) = dual!(l.tensor(), ar, t => {
        let seeds = ys.iter().map(|y| payload(ar, y.coords()).to_vec()).collect();
        let c = closure_core(ar, t, seeds, shortcut);
        (ar.wrap_echelon(c.span), c.passes, c.shortcut_used, c.commutative)
    });
    let subspace = Subspace::from_data(l.dim(), data);
    let spanned_by_extremals = if subspace.dim() == 1 && l.is_pure_extremal(&l.element(subspace.basis().remove(0))?)? {
        Tristate::Yes
    } else {
        Tristate::Unknown
    };
    Ok(InnerIdeal {
        algebra: l,
        subspace,
        commutative,
        spanned_by_extremals,
        provenance: Provenance {
            generators: ys.iter().map(|y| y.to_string()).collect(),
            passes,
            shortcut_used,
            shortcut_enabled: shortcut,
        },
    })
}

fn is_inner_core<A: Arith>(ar: &A, t: &Tensor<A>, span: &Echelon<A>) -> bool {
    let n = t.dim;
    span.rows.iter().all(|b| {
        (0..n).all(|k| {
            let col = t.bracket_basis(ar, b, k);
            kernels::is_zero(ar, &col) || span.rows.iter().all(|a| span.contains(ar, &t.bracket(ar, a, &col)))
        })
    })
}

/// Whether `[I,[I,L]] ⊆ I`, checked over basis triples.
pub fn is_inner_ideal(l: &LieAlgebra, i: &Subspace) -> Result<bool> {
    check_subspace(l, i)?;
    Ok(dual!(l.tensor(), ar, t => is_inner_core(ar, t, echelon_payload(ar, i))))
}

/// Whether `ad_x³ = 0 ≠ ad_x²`.
fn ad_index_three<A: Arith>(ar: &A, t: &Tensor<A>, x: &[A::E]) -> bool {
    let mut square_nonzero = false;
    for k in 0..t.dim {
        let w = t.bracket_basis(ar, x, k);
        if kernels::is_zero(ar, &w) {
            continue;
        }
        let w2 = t.bracket(ar, x, &w);
        if kernels::is_zero(ar, &w2) {
            continue;
        }
        square_nonzero = true;
        if !kernels::is_zero(ar, &t.bracket(ar, x, &w2)) {
            return false;
        }
    }
    square_nonzero
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenkartReport {
    /// Violated precondition, if any; the checks still run.
    pub precondition: Option<String>,
    pub commutative: bool,
    pub sampled: usize,
    pub exhaustive: bool,
    pub index_three: usize,
    pub holds: bool,
}

/// Projective points of a `d`-dimensional space are scanned when there are at most this many.
pub const EXHAUSTIVE_SAMPLE_LIMIT: u64 = 20_000;

/// Coefficient vectors with first nonzero entry one: one per projective point of `GF(p)^d`.
fn projective_coefficients(p: u32, d: usize) -> impl Iterator<Item = Vec<u32>> {
    (0..d).flat_map(move |lead| {
        let tail = d - lead - 1;
        (0..(p as u64).pow(tail as u32)).map(move |mut code| {
            let mut c = vec![0u32; d];
            c[lead] = 1;
            for slot in c[lead + 1..].iter_mut() {
                *slot = (code % p as u64) as u32;
                code /= p as u64;
            }
            c
        })
    })
}

fn projective_count(p: u32, d: usize) -> Option<u64> {
    let pd = (p as u64).checked_pow(d as u32)?;
    Some((pd - 1) / (p as u64 - 1))
}

/// `[I,I] = 0` and every sampled nonzero element of `I` has ad-index 3.
///
/// All projective points are tried when there are at most
/// [`EXHAUSTIVE_SAMPLE_LIMIT`]; otherwise `samples` seeded random elements.
pub fn benkart_check(ideal: &InnerIdeal, samples: usize, seed: u64) -> Result<BenkartReport> {
    let exhaustive = match ideal.algebra().field() {
        Field::Prime(p) => projective_count(p, ideal.dim()).is_some_and(|c| c <= EXHAUSTIVE_SAMPLE_LIMIT),
        Field::Rational => false,
    };
    benkart_core(ideal, if exhaustive { None } else { Some((samples, seed)) })
}

/// [`benkart_check`] over every projective point of `P(I)`, however many; finite fields only.
pub fn benkart_check_exhaustive(ideal: &InnerIdeal) -> Result<BenkartReport> {
    if ideal.algebra().field() == Field::Rational {
        return Err(Error::Unsupported("exhaustive scan needs a finite field".into()));
    }
    benkart_core(ideal, None)
}

fn benkart_core(ideal: &InnerIdeal, sampling: Option<(usize, u64)>) -> Result<BenkartReport> {
    let l = ideal.algebra();
    let precondition = if !l.is_simple_extremal_generated() {
        Some("algebra not known to be simple and extremal-generated".to_string())
    } else if !ideal.is_proper() {
        Some("ideal is not proper and nonzero".to_string())
    } else {
        None
    };
    let basis = ideal.subspace.basis();
    let d = basis.len();
    let coefficients: Box<dyn Iterator<Item = Vector>> = match sampling {
        None => {
            let f = l.field();
            let p = f.characteristic();
            Box::new(projective_coefficients(p, d).map(move |c| Vector::from_i64(f, &c.iter().map(|&x| x as i64).collect::<Vec<_>>())))
        }
        Some((samples, seed)) => {
            let f = l.field();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draws = if d == 0 { 0 } else { samples };
            Box::new(
                std::iter::repeat_with(move || Vector::random(f, d, &mut rng))
                    .filter(|c| !c.is_zero())
                    .take(draws),
            )
        }
    };
    let (commutative, sampled, index_three) = dual!(l.tensor(), ar, t => {
        let vs: Vec<&[_]> = basis.iter().map(|b| payload(ar, b)).collect();
        let commutative = vs.iter().enumerate().all(|(i, a)| vs[..i].iter().all(|b| kernels::is_zero(ar, &t.bracket(ar, a, b))));
        let mut sampled = 0;
        let mut index_three = 0;
        for c in coefficients {
            let x = combine_vectors(&basis, &c)?;
            sampled += 1;
            if ad_index_three(ar, t, payload(ar, &x)) {
                index_three += 1;
            }
        }
        (commutative, sampled, index_three)
    });
    let holds = commutative && index_three == sampled;
    Ok(BenkartReport { precondition, commutative, sampled, exhaustive: sampling.is_none(), index_three, holds })
}

fn combine_vectors(basis: &[Vector], c: &Vector) -> Result<Vector> {
    let mut v = basis[0].scale(&c.get(0))?;
    for (i, b) in basis.iter().enumerate().skip(1) {
        v = v.add_scaled(&c.get(i), b)?;
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FernandezReport {
    pub precondition: Option<String>,
    pub ad_index: Option<u32>,
    /// `a ∈ ad_a² L`.
    pub condition_i: bool,
    /// `ad_{ad_a²(x)}² = ad_a² ad_x² ad_a²` for every sampled `x`.
    pub condition_ii: bool,
    pub samples: usize,
    pub failures_ii: usize,
}

/// Compare `ad_y²` with `ad_a² ad_x² ad_a²` for `y = ad_a²(x)`, one basis column at a time.
fn operator_identity<A: Arith>(ar: &A, t: &Tensor<A>, a: &[A::E], x: &[A::E]) -> bool {
    let q = |u: &[A::E], v: &[A::E]| t.bracket(ar, u, &t.bracket(ar, u, v));
    let y = q(a, x);
    (0..t.dim).all(|k| {
        let ak = t.bracket(ar, a, &t.bracket_basis(ar, a, k));
        let yk = t.bracket(ar, &y, &t.bracket_basis(ar, &y, k));
        if kernels::is_zero(ar, &ak) {
            return kernels::is_zero(ar, &yk);
        }
        yk == q(a, &q(x, &ak))
    })
}

/// The two conditions under which `ad_a² L` is an inner ideal containing `a`.
pub fn fernandez_conditions(a: &Element, samples: usize, seed: u64) -> Result<FernandezReport> {
    let l = a.algebra();
    let failed = |msg: &str, index| FernandezReport {
        precondition: Some(msg.to_string()),
        ad_index: index,
        condition_i: false,
        condition_ii: false,
        samples: 0,
        failures_ii: 0,
    };
    if a.is_zero() {
        return Ok(failed("a is zero", Some(1)));
    }
    let index = l.ad_nilpotency_index(a, 4)?;
    if index != Some(3) {
        return Ok(failed("ad_a does not have nilpotency index 3", index));
    }
    let ad = l.ad_matrix(a)?;
    let condition_i = ad.mul(&ad)?.solve(a.coords())?.is_some();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<Element> = (0..samples).map(|_| l.random_element(&mut rng)).collect();
    let failures_ii = dual!(l.tensor(), ar, t => {
        let av = payload(ar, a.coords());
        xs.iter().filter(|x| !operator_identity(ar, t, av, payload(ar, x.coords()))).count()
    });
    let precondition = matches!(l.field().characteristic(), 2 | 3).then(|| "characteristic 2 or 3: no guarantee".to_string());
    Ok(FernandezReport { precondition, ad_index: index, condition_i, condition_ii: failures_ii == 0, samples, failures_ii })
}

/// Jordan block counts of a nilpotent map with `X³ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JordanProfile {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

pub fn jordan_profile(x: &ExactMatrix) -> Result<JordanProfile> {
    if x.rows() != x.cols() {
        return Err(Error::DimensionMismatch { expected: x.rows(), found: x.cols() });
    }
    let x2 = x.mul(x)?;
    if !x2.mul(x)?.is_zero() {
        return Err(Error::Precondition("map is not nilpotent of index at most 3".into()));
    }
    let (r1, r2) = (x.rank(), x2.rank());
    let n3 = r2;
    let n2 = r1 - 2 * r2;
    Ok(JordanProfile { n1: x.rows() - 2 * n2 - 3 * n3, n2, n3 })
}

/// The characteristic regime a table belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `p > 3`.
    Generic,
    /// `p = 3`.
    Three,
}

/// Last column of a table row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RowFlag {
    /// `ad_x² L` is not commutative.
    Nc,
    /// Commutative; its extremal points form a symplecton.
    Symp,
    /// Commutative; its extremal points form a shadow of the named type.
    Shadow(&'static str),
}

impl RowFlag {
    pub fn label(&self) -> &'static str {
        match self {
            RowFlag::Nc => "nc",
            RowFlag::Symp => "symp",
            RowFlag::Shadow(s) => s,
        }
    }

    pub fn commutative(&self) -> bool {
        !matches!(self, RowFlag::Nc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub algebra: &'static str,
    pub class: &'static str,
    /// One-based simple roots whose root vectors sum to the representative.
    pub representative: &'static [usize],
    pub dim_ad: usize,
    pub dim_ad2: usize,
    pub flag: RowFlag,
    pub regime: Regime,
}

impl TableRow {
    pub fn representative_label(&self) -> String {
        self.representative.iter().map(|i| format!("X_a{i}")).collect::<Vec<_>>().join("+")
    }
}

const fn row(
    algebra: &'static str,
    class: &'static str,
    representative: &'static [usize],
    dim_ad: usize,
    dim_ad2: usize,
    flag: RowFlag,
    regime: Regime,
) -> TableRow {
    TableRow { algebra, class, representative, dim_ad, dim_ad2, flag, regime }
}

use Regime::{Generic, Three};
use RowFlag::{Nc, Shadow, Symp};

/// Nilpotent classes of type A1^r (not long root elements), `p > 3`.
pub const GENERIC_TABLE: [TableRow; 12] = [
    row("E6", "A1^2", &[2, 3], 32, 8, Symp, Generic),
    row("E6", "A1^3", &[2, 3, 5], 40, 13, Nc, Generic),
    row("E7", "A1^2", &[1, 2], 52, 10, Symp, Generic),
    row("E7", "(A1^3)(1)", &[2, 5, 7], 54, 27, Shadow("E6,1"), Generic),
    row("E7", "(A1^3)(2)", &[2, 3, 5], 64, 19, Nc, Generic),
    row("E7", "A1^4", &[2, 3, 5, 7], 70, 28, Nc, Generic),
    row("E8", "A1^2", &[1, 2], 92, 14, Symp, Generic),
    row("E8", "A1^3", &[2, 3, 5], 112, 31, Nc, Generic),
    row("E8", "A1^4", &[2, 3, 5, 7], 128, 44, Nc, Generic),
    row("F4", "~A1", &[4], 22, 7, Symp, Generic),
    row("F4", "A1~A1", &[1, 4], 28, 10, Nc, Generic),
    row("G2", "~A1", &[1], 8, 5, Nc, Generic),
];

/// Classes of type A2^r A1^s with `r ≥ 1`, characteristic 3; all noncommutative.
pub const CHAR3_TABLE: [TableRow; 11] = [
    row("E6", "A2", &[1, 3], 42, 21, Nc, Three),
    row("E6", "A2A1", &[1, 2, 3], 46, 22, Nc, Three),
    row("E6", "A2A1^2", &[1, 2, 3, 5], 50, 23, Nc, Three),
    row("E6", "A2^2", &[1, 2, 5, 6], 47, 23, Nc, Three),
    row("E6", "A2^2A1", &[1, 2, 3, 5, 6], 51, 24, Nc, Three),
    row("E7", "A2A1^3", &[1, 2, 3, 5, 7], 84, 42, Nc, Three),
    row("E8", "A2^2A1^2", &[1, 2, 3, 5, 7, 8], 164, 80, Nc, Three),
    row("F4", "A2", &[1, 2], 30, 22, Nc, Three),
    row("F4", "~A2", &[3, 4], 30, 22, Nc, Three),
    row("F4", "A2~A1", &[1, 2, 4], 34, 19, Nc, Three),
    row("F4", "~A2A1", &[1, 3, 4], 36, 23, Nc, Three),
];

/// A representative of E6 class A2^2 whose simple roots do form two A2 components.
pub const E6_A2_SQUARED_ALTERNATIVE: TableRow = row("E6", "A2^2 (alt. rep)", &[1, 3, 5, 6], 47, 23, Nc, Three);

pub fn table(regime: Regime) -> &'static [TableRow] {
    match regime {
        Generic => &GENERIC_TABLE,
        Three => &CHAR3_TABLE,
    }
}

/// Look up a row by algebra type and class label.
pub fn find_row(algebra: &str, class: &str) -> Result<TableRow> {
    GENERIC_TABLE
        .iter()
        .chain(&CHAR3_TABLE)
        .chain(std::iter::once(&E6_A2_SQUARED_ALTERNATIVE))
        .find(|r| r.algebra.eq_ignore_ascii_case(algebra) && r.class == class)
        .copied()
        .ok_or_else(|| Error::Parse(format!("unknown class {class} for type {algebra}")))
}

/// Computed data for a nilpotent element in one algebra model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariantReport {
    pub algebra_dim: usize,
    pub dim_ad: usize,
    pub dim_ad2: usize,
    pub ad_cubed_zero: bool,
    /// `[ad_x² L, ad_x² L] = 0`.
    pub image_commutative: bool,
    pub image_inner: bool,
    pub closure_dim: usize,
    pub closure_is_image: bool,
    pub closure_shortcut: bool,
}

struct ImageData<A: Arith> {
    dim_ad: usize,
    image: Echelon<A>,
    ad_cubed_zero: bool,
    commutative: bool,
}

fn image_data<A: Arith>(ar: &A, t: &Tensor<A>, x: &[A::E]) -> ImageData<A> {
    let n = t.dim;
    let mut ad = Echelon::new(n);
    let mut image = Echelon::new(n);
    let mut ad_cubed_zero = true;
    for k in 0..n {
        let w = t.bracket_basis(ar, x, k);
        if kernels::is_zero(ar, &w) {
            continue;
        }
        let w2 = t.bracket(ar, x, &w);
        ad.insert(ar, w);
        if !kernels::is_zero(ar, &w2) {
            ad_cubed_zero &= kernels::is_zero(ar, &t.bracket(ar, x, &w2));
            image.insert(ar, w2);
        }
    }
    let rows = &image.rows;
    let commutative = rows.iter().enumerate().all(|(i, a)| rows[..i].iter().all(|b| kernels::is_zero(ar, &t.bracket(ar, a, b))));
    ImageData { dim_ad: ad.dim(), image, ad_cubed_zero, commutative }
}

/// Ranks of `ad_x` and `ad_x²`.
pub fn ad_ranks(x: &Element) -> (usize, usize) {
    dual!(x.algebra().tensor(), ar, t => {
        let d = image_data(ar, t, payload(ar, x.coords()));
        (d.dim_ad, d.image.dim())
    })
}

/// Image, commutativity and closure data for `x`.
pub fn analyse_nilpotent(x: &Element, shortcut: bool) -> Result<VariantReport> {
    let l = x.algebra();
    let closure = inner_closure_with(std::slice::from_ref(x), shortcut)?;
    let (dim_ad, dim_ad2, ad_cubed_zero, image_commutative, image_inner, closure_is_image) = dual!(l.tensor(), ar, t => {
        let d = image_data(ar, t, payload(ar, x.coords()));
        let inner = is_inner_core(ar, t, &d.image);
        let c = echelon_payload(ar, &closure.subspace);
        let same = c.dim() == d.image.dim() && d.image.rows.iter().all(|r| c.contains(ar, r));
        (d.dim_ad, d.image.dim(), d.ad_cubed_zero, d.commutative, inner, same)
    });
    Ok(VariantReport {
        algebra_dim: l.dim(),
        dim_ad,
        dim_ad2,
        ad_cubed_zero,
        image_commutative,
        image_inner,
        closure_dim: closure.dim(),
        closure_is_image,
        closure_shortcut: closure.provenance.shortcut_used,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub algebra: String,
    pub class: String,
    pub characteristic: u32,
    pub representative: String,
    pub expected_dim_ad: usize,
    pub expected_dim_ad2: usize,
    pub expected_flag: String,
    pub full: VariantReport,
    /// Same data in `L / Z(L)` when the center is nonzero.
    pub quotient: Option<VariantReport>,
    pub match_full: bool,
    pub match_quotient: Option<bool>,
    /// Dimensions match in the full algebra or the quotient.
    pub dims_match: bool,
    /// Commutativity agrees with the flag, and for commutative rows the closure of `x` is `ad_x² L`.
    pub flag_match: bool,
    /// Relation of the two summands for two-term representatives of extremal elements.
    pub pair_relation: Option<Relation>,
}

impl RowReport {
    pub fn matched(&self) -> bool {
        self.dims_match && self.flag_match
    }
}

fn algebra_for(row: &TableRow, p: u32) -> Result<ChevalleyAlgebra> {
    ChevalleyAlgebra::from_label(row.algebra, Field::prime(p)?)
}

fn regime_of(p: u32) -> Regime {
    if p == 3 {
        Three
    } else {
        Generic
    }
}

/// Compute a table row at characteristic `p`; `p` must fit the row's regime.
pub fn table_row_check(row: &TableRow, p: u32) -> Result<RowReport> {
    if regime_of(p) != row.regime {
        return Err(Error::Precondition(format!("{} {} belongs to the {:?} regime, not p = {p}", row.algebra, row.class, row.regime)));
    }
    evaluate_row(row, p)
}

/// Compute a row's data at any odd `p`, ignoring its regime.
pub fn evaluate_row(row: &TableRow, p: u32) -> Result<RowReport> {
    evaluate_row_with(row, p, true)
}

/// [`evaluate_row`] with the closure shortcut switchable.
pub fn evaluate_row_with(row: &TableRow, p: u32, shortcut: bool) -> Result<RowReport> {
    let ch = algebra_for(row, p)?;
    let l = ch.algebra();
    let x = ch.simple_root_sum(row.representative)?;
    let full = analyse_nilpotent(&x, shortcut)?;
    let q = l.simple_quotient()?;
    let quotient = if q.is_identity() { None } else { Some(analyse_nilpotent(&q.project(&x)?, shortcut)?) };
    let dims = |v: &VariantReport| v.dim_ad == row.dim_ad && v.dim_ad2 == row.dim_ad2;
    let match_full = dims(&full);
    let match_quotient = quotient.as_ref().map(dims);
    let flag_ok = |v: &VariantReport| {
        v.image_commutative == row.flag.commutative() && (!row.flag.commutative() || (v.image_inner && v.closure_is_image))
    };
    let flag_match = flag_ok(&full) || quotient.as_ref().is_some_and(flag_ok);
    let pair_relation = match row.representative {
        [a, b] => {
            let (xa, xb) = (ch.simple_root_vector(*a)?, ch.simple_root_vector(*b)?);
            match (ExtremalPoint::new(&xa), ExtremalPoint::new(&xb)) {
                (Ok(pa), Ok(pb)) => Some(geometry::classify_pair(&pa, &pb)?.relation),
                _ => None,
            }
        }
        _ => None,
    };
    Ok(RowReport {
        algebra: row.algebra.to_string(),
        class: row.class.to_string(),
        characteristic: p,
        representative: row.representative_label(),
        expected_dim_ad: row.dim_ad,
        expected_dim_ad2: row.dim_ad2,
        expected_flag: row.flag.label().to_string(),
        dims_match: match_full || match_quotient == Some(true),
        full,
        quotient,
        match_full,
        match_quotient,
        flag_match,
        pair_relation,
    })
}

/// Plain-text table in the layout type, representative, dims, flag.
pub fn render_table(reports: &[RowReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<4} {:<16} {:<30} {:>3} {:>9} {:>9} {:<6} {}\n",
        "type", "class", "representative", "p", "dim adL", "dim ad2L", "flag", "status"
    ));
    for r in reports {
        let (ad, ad2) = (r.full.dim_ad, r.full.dim_ad2);
        let mut status = if r.matched() { "match".to_string() } else { "MISMATCH".to_string() };
        if let Some(q) = &r.quotient {
            status.push_str(&format!(" (quotient {}/{}: {})", q.dim_ad, q.dim_ad2, if r.match_quotient == Some(true) { "match" } else { "differs" }));
        }
        if !r.matched() {
            status.push_str(&format!(" expected {}/{} {}", r.expected_dim_ad, r.expected_dim_ad2, r.expected_flag));
        }
        let flag = if r.full.image_commutative { "comm" } else { "nc" };
        out.push_str(&format!(
            "{:<4} {:<16} {:<30} {:>3} {:>9} {:>9} {:<6} {}\n",
            r.algebra, r.class, r.representative, r.characteristic, ad, ad2, flag, status
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct F4Example {
    pub characteristic: u32,
    pub dim_y: usize,
    pub y_commutative: bool,
    /// `[Y,[Y,L]] = ad_x² L`.
    pub yyl_is_image: bool,
    pub x_in_span: bool,
    /// `X_{−α1−2α2−2α3} + X_{α2+2α3+2α4} ± X_{α4}` are extremal.
    pub printed_plus_extremal: bool,
    pub printed_minus_extremal: bool,
    /// Some `X_{−α1−2α2−2α3} + s·X_{α2+2α3+2α4} + t·X_{α4}` with `s, t ≠ 0` is extremal.
    pub printed_any_coefficients: bool,
    /// `s = ±1` for which `X_{−α1−2α2−2α3} + s·X_{α1+2α2+2α3+2α4} ± X_{α4}` are both
    /// extremal; the two roots sum to `2α4`. The sign depends on the structure-constant signs.
    pub paired_sign: Option<i64>,
    /// The two combinations differ by `2·X_{α4}`.
    pub difference_is_2x: bool,
    /// `inner_closure({X_{α4}}) = span(Y)`.
    pub closure_is_span: bool,
    /// All elements of `Y` other than `x` are long root elements.
    pub others_long: bool,
}

impl F4Example {
    /// Everything except the extremality of the combinations.
    fn structure_holds(&self) -> bool {
        self.dim_y == 7 && self.y_commutative && self.yyl_is_image && self.x_in_span && self.difference_is_2x && self.closure_is_span && self.others_long
    }

    /// All claims, with the combinations as printed.
    pub fn holds(&self) -> bool {
        self.structure_holds() && self.printed_plus_extremal && self.printed_minus_extremal
    }

    /// All claims, with the second root replaced by its partner summing to `2α4`.
    pub fn holds_paired(&self) -> bool {
        self.structure_holds() && self.paired_sign.is_some()
    }
}

/// Roots spanning `ad_x² L` for `x = X_{α4}` in F4, in simple-root coordinates.
pub const F4_Y_ROOTS: [[i64; 4]; 7] = [
    [-1, -2, -2, 0],
    [-1, -1, -2, 0],
    [0, -1, -2, 0],
    [0, 0, 0, 1],
    [0, 1, 2, 2],
    [1, 1, 2, 2],
    [1, 2, 2, 2],
];

/// The short-root element `X_{α4}` of F4 and the 7 root vectors spanning its inner ideal.
pub fn f4_worked_example(p: u32) -> Result<F4Example> {
    let field = Field::prime(p)?;
    let ch = ChevalleyAlgebra::from_label("F4", field)?;
    let l = ch.algebra();
    let x = ch.simple_root_vector(4)?;
    let ys: Vec<Element> = F4_Y_ROOTS.iter().map(|r| ch.root_vector(r)).collect::<Result<_>>()?;
    let span_y = Subspace::span(l.field(), l.dim(), &ys.iter().map(|y| y.coords().clone()).collect::<Vec<_>>())?;
    let y_commutative = ys.iter().all(|a| ys.iter().all(|b| a.bracket(b).is_ok_and(|c| c.is_zero())));
    let (yyl, image) = dual!(l.tensor(), ar, t => {
        let n = t.dim;
        let mut yyl = Echelon::new(n);
        for a in &ys {
            for b in &ys {
                for k in 0..n {
                    let col = t.bracket_basis(ar, payload(ar, b.coords()), k);
                    yyl.insert(ar, t.bracket(ar, payload(ar, a.coords()), &col));
                }
            }
        }
        let image = image_data(ar, t, payload(ar, x.coords())).image;
        (ar.wrap_echelon(yyl), ar.wrap_echelon(image))
    });
    let yyl = Subspace::from_data(l.dim(), yyl);
    let image = Subspace::from_data(l.dim(), image);
    let combo = |second: &Element, s: i64, t: i64| -> Result<Element> {
        ys[0].add(&second.scale_i64(s))?.add(&x.scale_i64(t))
    };
    let printed_plus = combo(&ys[4], 1, 1)?;
    let printed_minus = combo(&ys[4], 1, -1)?;
    let mut printed_any_coefficients = false;
    for s in 1..p as i64 {
        for t in 1..p as i64 {
            printed_any_coefficients |= l.is_extremal(&combo(&ys[4], s, t)?)?;
        }
    }
    let mut paired_sign = None;
    for s in [1, -1] {
        if l.is_extremal(&combo(&ys[6], s, 1)?)? && l.is_extremal(&combo(&ys[6], s, -1)?)? {
            paired_sign = Some(s);
            break;
        }
    }
    let closure = inner_closure(std::slice::from_ref(&x))?;
    let others_long = F4_Y_ROOTS.iter().filter(|r| **r != [0, 0, 0, 1]).all(|r| ch.root_system().is_long(r));
    Ok(F4Example {
        characteristic: p,
        dim_y: span_y.dim(),
        y_commutative,
        yyl_is_image: yyl == image,
        x_in_span: span_y.contains(x.coords())?,
        printed_plus_extremal: l.is_extremal(&printed_plus)?,
        printed_minus_extremal: l.is_extremal(&printed_minus)?,
        printed_any_coefficients,
        paired_sign,
        difference_is_2x: printed_plus.sub(&printed_minus)? == x.scale_i64(2),
        closure_is_span: closure.subspace == span_y,
        others_long,
    })
}

/// Largest projective scan of `P(I)`.
pub const SHADOW_SCAN_CAP: u64 = 10_000_000;

/// Per-algebra data reused across shadow reconstructions.
#[derive(Clone, Debug)]
pub struct ShadowContext {
    algebra: LieAlgebra,
    lines_exist: bool,
    /// Complete geometry, kept when there are no lines (symplecta then need all points).
    global: Option<ExtremalGeometry>,
}

impl ShadowContext {
    /// Decide whether the algebra has lines; without lines, enumerate all points (up to `cap`).
    pub fn new(l: &LieAlgebra, cap: usize) -> Result<ShadowContext> {
        let lines_exist = geometry::detect_lines(l, 10_000, 0x5ad0)?;
        let global = if lines_exist {
            None
        } else {
            let pts = geometry::enumerate_extremal_points(l, &[], cap)?;
            let g = geometry::build_space(&pts)?;
            if g.lines_exist() {
                return Ok(ShadowContext { algebra: l.clone(), lines_exist: true, global: None });
            }
            Some(g)
        };
        Ok(ShadowContext { algebra: l.clone(), lines_exist, global })
    }

    pub fn lines_exist(&self) -> bool {
        self.lines_exist
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShadowReport {
    pub ideal_dim: usize,
    /// Number of extremal points in `P(I)`.
    pub points: usize,
    /// The extremal points span `I`.
    pub spans: bool,
    pub class: SetClass,
    /// Classified inside the complete point set rather than the local one.
    pub global: bool,
}

/// Find the extremal points of `P(I)` by a projective scan and classify them.
pub fn shadow_reconstruction(ideal: &InnerIdeal, ctx: &ShadowContext) -> Result<ShadowReport> {
    let l = ideal.algebra();
    if l != &ctx.algebra {
        return Err(Error::AlgebraMismatch);
    }
    if !ideal.is_proper() {
        return Err(Error::Precondition("ideal must be proper and nonzero".into()));
    }
    let p = match l.field() {
        Field::Prime(p) => p,
        Field::Rational => return Err(Error::Unsupported("shadow reconstruction needs a finite field".into())),
    };
    let d = ideal.dim();
    match projective_count(p, d) {
        Some(c) if c <= SHADOW_SCAN_CAP => {}
        _ => return Err(Error::Infeasible(format!("P(I) has more than {SHADOW_SCAN_CAP} points (dim {d}, p = {p})"))),
    }
    let (ar, t) = match l.tensor() {
        Dual::Mod(ar, t) => (*ar, t),
        Dual::Rat(..) => unreachable!("finite field checked"),
    };
    let basis: Vec<Vec<u32>> = echelon_payload(&ar, &ideal.subspace).rows.clone();
    let n = l.dim();
    let mut points = Vec::new();
    let mut span = Echelon::<ModArith>::new(n);
    for c in projective_coefficients(p, d) {
        let mut x = vec![0u32; n];
        for (ci, b) in c.iter().zip(&basis) {
            if *ci != 0 {
                kernels::axpy(&ar, &mut x, ci, b);
            }
        }
        if t.extremal_purity(&ar, &x) == Some(true) {
            span.insert(&ar, x.clone());
            points.push(x);
        }
    }
    let spans = span.dim() == d;
    let (class, global) = match &ctx.global {
        Some(g) => {
            let mut ids = Vec::with_capacity(points.len());
            for x in &points {
                let e = l.element(Vector(Dual::Mod(ar, x.clone())))?;
                ids.push(g.points().index_of_element(&e).ok_or_else(|| Error::Infeasible("extremal point missing from the complete set".into()))?);
            }
            (classify_ids(g, &ids)?, true)
        }
        None => {
            let set = PointSet::from_subspace_scan(l, points.clone())?;
            let g = geometry::build_space_with(&set, Some(ctx.lines_exist))?;
            let ids: Vec<usize> = (0..g.len()).collect();
            (classify_ids(&g, &ids)?, false)
        }
    };
    Ok(ShadowReport { ideal_dim: d, points: points.len(), spans, class, global })
}

fn classify_ids(g: &ExtremalGeometry, ids: &[usize]) -> Result<SetClass> {
    if ids.is_empty() {
        return Ok(SetClass::Other { failed: "no extremal points".into() });
    }
    g.classify_extremal_set(ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::MatrixAlgebra;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn extremal_closure_is_a_line_of_length_one() {
        let sl3 = MatrixAlgebra::sl(3, gf(5)).unwrap();
        let x = sl3.matrix_unit(1, 2).unwrap();
        let i = inner_closure(&[x]).unwrap();
        assert_eq!(i.dim(), 1);
        assert_eq!(i.spanned_by_extremals(), Tristate::Yes);
        assert!(i.is_commutative() && i.verify().unwrap());
    }

    #[test]
    fn strongly_commuting_pair_spans_two() {
        let sl3 = MatrixAlgebra::sl(3, gf(5)).unwrap();
        let i = inner_closure(&[sl3.matrix_unit(1, 2).unwrap(), sl3.matrix_unit(1, 3).unwrap()]).unwrap();
        assert_eq!(i.dim(), 2);
    }

    #[test]
    fn sl2_pair_is_not_inner() {
        let sl2 = MatrixAlgebra::sl(2, gf(5)).unwrap();
        let l = sl2.algebra();
        let s = Subspace::span(l.field(), l.dim(), &[sl2.matrix_unit(1, 2).unwrap().coords().clone(), sl2.matrix_unit(2, 1).unwrap().coords().clone()]).unwrap();
        assert!(!is_inner_ideal(l, &s).unwrap());
        assert!(is_inner_ideal(l, &Subspace::full(l.field(), l.dim())).unwrap());
    }

    #[test]
    fn shortcut_and_raw_closure_agree_on_hyperbolic_pair() {
        let sl3 = MatrixAlgebra::sl(3, gf(5)).unwrap();
        let ys = [sl3.matrix_unit(1, 2).unwrap(), sl3.matrix_unit(2, 1).unwrap()];
        let a = inner_closure_with(&ys, true).unwrap();
        let b = inner_closure_with(&ys, false).unwrap();
        assert!(a.provenance().shortcut_used && !b.provenance().shortcut_used);
        assert_eq!(a.subspace(), b.subspace());
        assert_eq!(a.dim(), 8);
    }

    #[test]
    fn jordan_profiles() {
        let f = gf(5);
        let z = ExactMatrix::zeros(f, 5, 5);
        assert_eq!(jordan_profile(&z).unwrap(), JordanProfile { n1: 5, n2: 0, n3: 0 });
        let mut m = ExactMatrix::zeros(f, 4, 4);
        m.set(0, 1, &f.one()).unwrap();
        m.set(2, 3, &f.one()).unwrap();
        assert_eq!(jordan_profile(&m).unwrap(), JordanProfile { n1: 0, n2: 2, n3: 0 });
        let mut m = ExactMatrix::zeros(f, 3, 3);
        m.set(0, 1, &f.one()).unwrap();
        m.set(1, 2, &f.one()).unwrap();
        assert_eq!(jordan_profile(&m).unwrap(), JordanProfile { n1: 0, n2: 0, n3: 1 });
        let mut m = ExactMatrix::zeros(f, 4, 4);
        for i in 0..3 {
            m.set(i, i + 1, &f.one()).unwrap();
        }
        assert!(jordan_profile(&m).is_err());
    }

    #[test]
    fn benkart_on_a_line_and_on_l() {
        let sl3 = MatrixAlgebra::sl(3, gf(5)).unwrap();
        let line = inner_closure(&[sl3.matrix_unit(1, 2).unwrap(), sl3.matrix_unit(1, 3).unwrap()]).unwrap();
        let r = benkart_check(&line, 50, 1).unwrap();
        assert!(r.holds && r.exhaustive && r.precondition.is_none());
        assert_eq!(r.sampled, 6);
        let all = inner_closure(&[sl3.matrix_unit(1, 2).unwrap(), sl3.matrix_unit(2, 1).unwrap()]).unwrap();
        assert!(benkart_check(&all, 10, 1).unwrap().precondition.is_some());
    }

    #[test]
    fn fernandez_rejects_zero() {
        let sl3 = MatrixAlgebra::sl(3, gf(5)).unwrap();
        let r = fernandez_conditions(&sl3.algebra().zero(), 10, 1).unwrap();
        assert!(r.precondition.is_some() && !r.condition_i);
    }

    #[test]
    fn projective_scan_counts() {
        assert_eq!(projective_coefficients(3, 3).count(), 13);
        assert_eq!(projective_count(5, 2), Some(6));
    }

    #[test]
    fn row_lookup() {
        assert_eq!(find_row("F4", "~A1").unwrap().dim_ad, 22);
        assert!(find_row("F4", "A7").is_err());
    }
}
