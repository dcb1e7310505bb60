//! Pairs of extremal points, enumeration of the extremal point set by
//! exponentials, and the point-line spaces built on it.

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dual::{dual, Backend, Dual};
use crate::error::{Error, Result};
use crate::field::{Arith, Field, FieldScalar, ModArith};
use crate::lie::{Element, ExtremalPoint, LieAlgebra, Tensor};
use crate::linalg::{kernels, Vector};

/// The five relations between two pure extremal points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Relation {
    SamePoint,
    StronglyCommuting,
    Polar,
    Special,
    Hyperbolic,
}

impl Relation {
    pub const ALL: [Relation; 5] =
        [Relation::SamePoint, Relation::StronglyCommuting, Relation::Polar, Relation::Special, Relation::Hyperbolic];

    /// Tag code 0–4 used in exports.
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(c: u8) -> Option<Relation> {
        Relation::ALL.get(c as usize).copied()
    }

    /// Same point, strongly commuting or polar.
    pub fn is_commuting(self) -> bool {
        matches!(self, Relation::SamePoint | Relation::StronglyCommuting | Relation::Polar)
    }

    pub fn name(self) -> &'static str {
        match self {
            Relation::SamePoint => "same point",
            Relation::StronglyCommuting => "strongly commuting",
            Relation::Polar => "polar",
            Relation::Special => "special",
            Relation::Hyperbolic => "hyperbolic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRelation {
    pub relation: Relation,
    /// `[x, y]` for special pairs.
    pub bracket: Option<Element>,
    /// `g(x, y)` for hyperbolic pairs.
    pub g: Option<FieldScalar>,
    /// Hyperbolic pair with `g(x, y) = 0`, settled by the span test instead.
    pub anomaly: bool,
}

struct Decision<E> {
    relation: Relation,
    bracket: Option<Vec<E>>,
    g: Option<E>,
    anomaly: bool,
}

/// Parameters `t` for which extremality of `x + t·y` (with `x`, `y` extremal)
/// certifies the whole pencil.
fn pencil_params<A: Arith>(ar: &A) -> Vec<A::E> {
    match ar.field() {
        Field::Prime(p) => (1..p as i64).map(|t| ar.from_i64(t)).collect(),
        // The conditions on x + t·y are cubic in t; t = 0, 1, 2, 3 pin them down.
        Field::Rational => (1..=3).map(|t| ar.from_i64(t)).collect(),
    }
}

fn combine<A: Arith>(ar: &A, x: &[A::E], t: &A::E, y: &[A::E]) -> Vec<A::E> {
    let mut z = x.to_vec();
    kernels::axpy(ar, &mut z, t, y);
    z
}

/// Whether `x, y, [x,y]` span a 3-dimensional subalgebra shaped like sl2.
fn sl2_span<A: Arith>(
    ar: &A,
    x: &[A::E],
    y: &[A::E],
    h: &[A::E],
    ad_x: &dyn Fn(&[A::E]) -> Vec<A::E>,
    ad_y: &dyn Fn(&[A::E]) -> Vec<A::E>,
) -> bool {
    let n = x.len();
    let mut span = kernels::Echelon::<A>::new(n);
    let independent = span.insert(ar, x.to_vec()) && span.insert(ar, y.to_vec()) && span.insert(ar, h.to_vec());
    if !independent {
        return false;
    }
    let xh = ad_x(h);
    let yh = ad_y(h);
    let nonzero_multiple = |v: &[A::E], w: &[A::E]| kernels::ratio(ar, v, w).is_some_and(|r| !ar.is_zero(&r));
    span.contains(ar, &xh) && span.contains(ar, &yh) && nonzero_multiple(&xh, x) && nonzero_multiple(&yh, y)
}

/// The relation of two pure extremal elements; `None` if no relation fits.
fn decide<A: Arith>(
    ar: &A,
    x: &[A::E],
    y: &[A::E],
    ad_x: &dyn Fn(&[A::E]) -> Vec<A::E>,
    ad_y: &dyn Fn(&[A::E]) -> Vec<A::E>,
    extremal: &dyn Fn(&[A::E]) -> bool,
) -> Option<Decision<A::E>> {
    let plain = |relation| Decision { relation, bracket: None, g: None, anomaly: false };
    if kernels::ratio(ar, y, x).is_some() {
        return Some(plain(Relation::SamePoint));
    }
    let b = ad_x(y);
    if kernels::is_zero(ar, &b) {
        let all = pencil_params(ar).iter().all(|t| extremal(&combine(ar, x, t, y)));
        return Some(plain(if all { Relation::StronglyCommuting } else { Relation::Polar }));
    }
    // [x,[x,y]] = 2g(x,y)x. When g ≠ 0 the span of x, y, [x,y] is sl2 and [x,y] is not extremal.
    let xb = ad_x(&b);
    let two_g = if kernels::is_zero(ar, &xb) { ar.zero() } else { kernels::ratio(ar, &xb, x)? };
    if !ar.is_zero(&two_g) {
        let g = ar.mul(&two_g, &ar.inv(&ar.from_i64(2)).expect("odd characteristic"));
        return Some(Decision { relation: Relation::Hyperbolic, bracket: None, g: Some(g), anomaly: false });
    }
    if extremal(&b) {
        return Some(Decision { relation: Relation::Special, bracket: Some(b), g: None, anomaly: false });
    }
    if sl2_span(ar, x, y, &b, ad_x, ad_y) {
        return Some(Decision { relation: Relation::Hyperbolic, bracket: None, g: Some(ar.zero()), anomaly: true });
    }
    None
}

fn payload<'a, A: Backend>(_ar: &A, v: &'a Vector) -> &'a [A::E] {
    A::unwrap_vec(&v.0).expect("vector lives in the algebra's field")
}

/// Classify a pair of certified pure extremal points.
pub fn classify_pair(x: &ExtremalPoint, y: &ExtremalPoint) -> Result<PairRelation> {
    let l = x.algebra();
    if y.algebra() != l {
        return Err(Error::AlgebraMismatch);
    }
    let (xv, yv) = (x.element().coords(), y.element().coords());
    let decided = dual!(l.tensor(), ar, t => {
        let (xs, ys) = (payload(ar, xv), payload(ar, yv));
        decide(
            ar,
            xs,
            ys,
            &|v| t.bracket(ar, xs, v),
            &|v| t.bracket(ar, ys, v),
            &|v| t.extremal_purity(ar, v).is_some(),
        )
        .map(|d| (d.relation, d.bracket.map(|b| Vector(ar.wrap_vec(b))), d.g.map(|g| ar.to_scalar(&g)), d.anomaly))
    });
    let (relation, bracket, g, anomaly) =
        decided.ok_or_else(|| Error::Infeasible(format!("pair ({}, {}) fits none of the five relations", x.element(), y.element())))?;
    let bracket = bracket.map(|b| l.element(b)).transpose()?;
    Ok(PairRelation { relation, bracket, g, anomaly })
}

/// `exp(t·ad_u) v = v + t[u,v] + (t²/2)[u,[u,v]]`, an automorphism when `u` is extremal.
pub fn exp_ad(u: &Element, t: &FieldScalar, v: &Element) -> Result<Element> {
    let uv = u.bracket(v)?;
    let uuv = u.bracket(&uv)?;
    let half = FieldScalar::from_i64(t.field(), 2).inv()?;
    v.add(&uv.scale(t)?)?.add(&uuv.scale(&(&(t * t) * &half))?)
}

/// How a [`PointSet`] relates to the full set of extremal points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coverage {
    /// Closed under the exponentials; all extremal points of the orbit.
    Complete,
    /// Enumeration stopped at the cap.
    Truncated,
    /// An explicitly given set, such as the extremal points of a subspace.
    Subset,
}

/// Extremal points over a prime field, stored as normalized residue vectors.
#[derive(Clone, Debug)]
pub struct PointSet {
    algebra: LieAlgebra,
    ar: ModArith,
    coords: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    coverage: Coverage,
    /// Holds every extremal point of the span of its points, so membership decides extremality.
    saturated: bool,
}

fn mod_parts(l: &LieAlgebra) -> Result<(ModArith, &Tensor<ModArith>)> {
    match l.tensor() {
        Dual::Mod(ar, t) => Ok((*ar, t)),
        Dual::Rat(..) => Err(Error::Unsupported("point sets need a finite field".into())),
    }
}

fn normalized(ar: &ModArith, v: &[u32]) -> Vec<u32> {
    let mut w = v.to_vec();
    kernels::normalize(ar, &mut w);
    w
}

/// Dense `n × n` residue matrix times a vector, reducing once per row.
fn matvec(p: u32, a: &[u32], x: &[u32]) -> Vec<u32> {
    let n = x.len();
    let support: Vec<usize> = (0..n).filter(|&j| x[j] != 0).collect();
    (0..n)
        .map(|i| {
            let row = &a[i * n..(i + 1) * n];
            let s: u64 = support.iter().map(|&j| row[j] as u64 * x[j] as u64).sum();
            (s % p as u64) as u32
        })
        .collect()
}

impl PointSet {
    /// Wrap explicitly given points.
    pub fn from_points(algebra: &LieAlgebra, points: &[ExtremalPoint]) -> Result<PointSet> {
        let (ar, _) = mod_parts(algebra)?;
        let mut set = PointSet { algebra: algebra.clone(), ar, coords: Vec::new(), index: HashMap::new(), coverage: Coverage::Subset, saturated: false };
        for x in points {
            if x.algebra() != algebra {
                return Err(Error::AlgebraMismatch);
            }
            set.insert(payload(&ar, x.element().coords()).to_vec());
        }
        Ok(set)
    }

    /// All extremal points of some subspace, as residue vectors.
    pub(crate) fn from_subspace_scan(algebra: &LieAlgebra, points: Vec<Vec<u32>>) -> Result<PointSet> {
        let (ar, _) = mod_parts(algebra)?;
        let mut set = PointSet { algebra: algebra.clone(), ar, coords: Vec::new(), index: HashMap::new(), coverage: Coverage::Subset, saturated: true };
        for v in points {
            set.insert(normalized(&ar, &v));
        }
        Ok(set)
    }

    fn insert(&mut self, v: Vec<u32>) -> bool {
        if self.index.contains_key(&v) {
            return false;
        }
        self.index.insert(v.clone(), self.coords.len());
        self.coords.push(v);
        true
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coverage(&self) -> Coverage {
        self.coverage
    }

    pub fn point(&self, i: usize) -> ExtremalPoint {
        let v = Vector(Dual::Mod(self.ar, self.coords[i].clone()));
        ExtremalPoint::new_unchecked(self.algebra.element(v).expect("same algebra"))
    }

    pub fn residues(&self, i: usize) -> &[u32] {
        &self.coords[i]
    }

    pub fn index_of(&self, x: &ExtremalPoint) -> Option<usize> {
        if x.algebra() != &self.algebra {
            return None;
        }
        self.index.get(payload(&self.ar, x.element().coords())).copied()
    }

    /// Index of the point spanned by a nonzero element.
    pub fn index_of_element(&self, x: &Element) -> Option<usize> {
        if x.algebra() != &self.algebra {
            return None;
        }
        self.lookup(payload(&self.ar, x.coords()))
    }

    fn lookup(&self, v: &[u32]) -> Option<usize> {
        self.index.get(&normalized(&self.ar, v)).copied()
    }
}

/// A nilpotent `x` whose truncated exponential `Σ_{k<m} t^k ad_x^k / k!` is an automorphism.
#[derive(Clone, Debug)]
struct Mover {
    ad: Vec<u32>,
    order: usize,
}

/// Nilpotency index of `ad_x`, or `None` if it is not nilpotent.
fn nilpotency(ar: &ModArith, t: &Tensor<ModArith>, x: &[u32]) -> Option<usize> {
    let n = x.len();
    let mut order = 1;
    for a in 0..n {
        let mut v = t.bracket_basis(ar, x, a);
        let mut k = 1;
        while !kernels::is_zero(ar, &v) {
            if k > n {
                return None;
            }
            v = t.bracket(ar, x, &v);
            k += 1;
        }
        order = order.max(k);
    }
    Some(order)
}

/// Whether the truncated exponential of a nilpotent `x` with `ad_x^order = 0` preserves brackets.
///
/// Leibniz settles every degree below `p`; degrees `p..=2·order−2` are checked on basis pairs.
fn truncated_exp_is_automorphism(ar: &ModArith, t: &Tensor<ModArith>, x: &[u32], order: usize) -> bool {
    let p = ar.modulus() as usize;
    if order == 0 || order > p {
        return order == 0;
    }
    if 2 * order - 2 < p {
        return true;
    }
    let n = x.len();
    let inv_fact: Vec<u32> = (0..order)
        .scan(1u32, |f, k| {
            if k > 0 {
                *f = ar.mul(f, &(k as u32));
            }
            Some(ar.inv(f).expect("k < p"))
        })
        .collect();
    // powers[a][k] = ad_x^k e_a / k!
    let powers: Vec<Vec<Vec<u32>>> = (0..n)
        .map(|a| {
            let mut v = vec![0; n];
            v[a] = 1;
            let mut out = vec![v.clone()];
            for k in 1..order {
                v = t.bracket(ar, x, &v);
                let mut s = v.clone();
                kernels::scale(ar, &mut s, &inv_fact[k]);
                out.push(s);
            }
            out
        })
        .collect();
    (0..n).into_par_iter().all(|a| {
        (0..n).all(|b| {
            (p..=2 * order - 2).all(|deg| {
                let mut sum = vec![0; n];
                for i in deg.saturating_sub(order - 1)..order.min(deg + 1) {
                    let term = t.bracket(ar, &powers[a][i], &powers[b][deg - i]);
                    kernels::axpy(ar, &mut sum, &1, &term);
                }
                kernels::is_zero(ar, &sum)
            })
        })
    })
}

fn basis_movers(ar: &ModArith, t: &Tensor<ModArith>) -> Vec<Mover> {
    let n = t.dim;
    (0..n)
        .into_par_iter()
        .filter_map(|i| {
            let mut x = vec![0; n];
            x[i] = 1;
            let order = nilpotency(ar, t, &x)?;
            (order > 1 && truncated_exp_is_automorphism(ar, t, &x, order)).then(|| Mover { ad: t.ad(ar, &x), order })
        })
        .collect()
}

/// `t^k / k!` for each `t ∈ GF(p)^×` (outer index `t − 1`) and `k` below the largest mover order.
fn exp_coefficients(ar: &ModArith, movers: &[Mover]) -> Vec<Vec<u32>> {
    let p = ar.modulus();
    let max_order = movers.iter().map(|m| m.order).max().unwrap_or(0);
    (1..p)
        .map(|s| {
            let (mut c, mut out) = (1u32, vec![1u32]);
            for k in 1..max_order {
                c = ar.mul(&ar.mul(&c, &s), &ar.inv(&(k as u32 % p)).unwrap_or(0));
                out.push(c);
            }
            out
        })
        .collect()
}

impl Mover {
    /// `ad^k v` for `k` below the order, stopping at the first zero.
    fn powers(&self, p: u32, v: &[u32]) -> Vec<Vec<u32>> {
        let mut powers = vec![v.to_vec()];
        for _ in 1..self.order {
            let next = matvec(p, &self.ad, powers.last().expect("nonempty"));
            if next.iter().all(|&c| c == 0) {
                break;
            }
            powers.push(next);
        }
        powers
    }
}

fn apply_exp(p: u32, powers: &[Vec<u32>], coeffs: &[u32]) -> Vec<u32> {
    (0..powers[0].len())
        .map(|k| {
            let s: u64 = powers.iter().zip(coeffs).map(|(pw, ck)| pw[k] as u64 * *ck as u64).sum();
            (s % p as u64) as u32
        })
        .collect()
}

/// Random extremal points: random words in the enumeration movers applied to a generator.
#[derive(Clone, Debug)]
pub struct ExtremalSampler {
    algebra: LieAlgebra,
    ar: ModArith,
    starts: Vec<Vec<u32>>,
    movers: Vec<Mover>,
    coeffs: Vec<Vec<u32>>,
}

impl ExtremalSampler {
    pub fn new(l: &LieAlgebra) -> Result<ExtremalSampler> {
        let (ar, t) = mod_parts(l)?;
        let mut starts = Vec::new();
        let mut movers = Vec::new();
        for g in l.extremal_generators() {
            let g = ExtremalPoint::new(&g)?;
            let v = payload(&ar, g.element().coords()).to_vec();
            movers.push(Mover { ad: t.ad(&ar, &v), order: 3 });
            starts.push(v);
        }
        if starts.is_empty() {
            return Err(Error::Precondition("algebra has no registered extremal generators".into()));
        }
        movers.extend(basis_movers(&ar, t));
        let coeffs = exp_coefficients(&ar, &movers);
        Ok(ExtremalSampler { algebra: l.clone(), ar, starts, movers, coeffs })
    }

    /// Apply `steps` random exponentials to `x`.
    pub fn perturb<R: Rng + ?Sized>(&self, x: &ExtremalPoint, steps: usize, rng: &mut R) -> Result<ExtremalPoint> {
        if x.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let v = self.walk(payload(&self.ar, x.element().coords()).to_vec(), steps, rng);
        Ok(self.point(v))
    }

    /// A generator moved by `steps` random exponentials.
    pub fn sample<R: Rng + ?Sized>(&self, steps: usize, rng: &mut R) -> ExtremalPoint {
        let start = self.starts[rng.gen_range(0..self.starts.len())].clone();
        self.point(self.walk(start, steps, rng))
    }

    fn walk<R: Rng + ?Sized>(&self, mut v: Vec<u32>, steps: usize, rng: &mut R) -> Vec<u32> {
        let p = self.ar.modulus();
        for _ in 0..steps {
            let m = &self.movers[rng.gen_range(0..self.movers.len())];
            let c = &self.coeffs[rng.gen_range(0..self.coeffs.len())];
            v = apply_exp(p, &m.powers(p, &v), c);
        }
        v
    }

    fn point(&self, v: Vec<u32>) -> ExtremalPoint {
        let e = self.algebra.element(Vector(Dual::Mod(self.ar, v))).expect("same algebra");
        ExtremalPoint::new_unchecked(e)
    }
}

/// Close `seeds` and the algebra's registered extremal generators under
/// `exp(t·ad_u)`, `t ∈ GF(p)^×`, for `u` among them and for every nilpotent
/// basis element whose truncated exponential is an automorphism.
///
/// Every point `v` of the closure is `h·s` for `h` in the group generated by
/// these exponentials and `s` a seed or generator, and
/// `exp(ad_{h·s}) = h exp(ad_s) h⁻¹`, so the result is also closed under the
/// exponentials of all its own points. The basis movers matter when long root
/// vectors span a proper subsystem (types B, G): without them the orbit stays
/// inside the subalgebra of that subsystem.
pub fn enumerate_extremal_points(l: &LieAlgebra, seeds: &[ExtremalPoint], cap: usize) -> Result<PointSet> {
    if cap == 0 {
        return Err(Error::Precondition("cap must be positive".into()));
    }
    let (ar, t) = mod_parts(l)?;
    let p = ar.modulus();
    let mut starts: Vec<Vec<u32>> = Vec::new();
    for s in seeds {
        if s.algebra() != l {
            return Err(Error::AlgebraMismatch);
        }
        starts.push(payload(&ar, s.element().coords()).to_vec());
    }
    for g in l.extremal_generators() {
        let g = ExtremalPoint::new(&g)?;
        starts.push(payload(&ar, g.element().coords()).to_vec());
    }
    let mut set = PointSet { algebra: l.clone(), ar, coords: Vec::new(), index: HashMap::new(), coverage: Coverage::Complete, saturated: false };
    let mut movers = Vec::new();
    for s in &starts {
        if set.insert(s.clone()) {
            movers.push(Mover { ad: t.ad(&ar, s), order: 3 });
        }
        if set.len() >= cap {
            set.coverage = Coverage::Truncated;
            return Ok(set);
        }
    }
    movers.extend(basis_movers(&ar, t));
    let coeffs = exp_coefficients(&ar, &movers);
    let mut queue: VecDeque<usize> = (0..set.len()).collect();
    while let Some(i) = queue.pop_front() {
        let v = set.coords[i].clone();
        for m in &movers {
            let powers = m.powers(p, &v);
            if powers.len() == 1 {
                continue;
            }
            for c in &coeffs {
                let w = apply_exp(p, &powers, c);
                let w = normalized(&ar, &w);
                if set.index.contains_key(&w) {
                    continue;
                }
                if set.len() >= cap {
                    set.coverage = Coverage::Truncated;
                    return Ok(set);
                }
                set.insert(w);
                queue.push_back(set.len() - 1);
            }
        }
    }
    Ok(set)
}

/// Search for a strongly commuting pair: all pairs of generators, then random
/// pairs of nearby conjugates. `false` means none was found in `samples` tries.
pub fn detect_lines(l: &LieAlgebra, samples: usize, seed: u64) -> Result<bool> {
    let gens = l.extremal_generators().iter().map(ExtremalPoint::new).collect::<Result<Vec<_>>>()?;
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            if classify_pair(a, b)?.relation == Relation::StronglyCommuting {
                return Ok(true);
            }
        }
    }
    if gens.is_empty() {
        return Ok(false);
    }
    let sampler = ExtremalSampler::new(l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = sampler.sample(8, &mut rng);
        let steps = rng.gen_range(1..=2);
        let y = sampler.perturb(&x, steps, &mut rng)?;
        if classify_pair(&x, &y)?.relation == Relation::StronglyCommuting {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Abstract point-line space on points `0..points`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointLineSpace {
    pub points: usize,
    pub lines: Vec<Vec<usize>>,
}

impl PointLineSpace {
    pub fn new(points: usize, lines: Vec<Vec<usize>>) -> Result<PointLineSpace> {
        for l in &lines {
            if l.len() < 2 || l.iter().any(|&p| p >= points) {
                return Err(Error::Precondition("lines need at least two valid points".into()));
            }
        }
        Ok(PointLineSpace { points, lines })
    }

    /// Collinearity adjacency, excluding each point itself.
    pub fn collinearity(&self) -> Vec<FixedBitSet> {
        let mut adj = vec![FixedBitSet::with_capacity(self.points); self.points];
        for l in &self.lines {
            for &a in l {
                for &b in l {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
        }
        adj
    }

    fn lines_on(&self) -> Vec<Vec<usize>> {
        let mut on = vec![Vec::new(); self.points];
        for (i, l) in self.lines.iter().enumerate() {
            for &p in l {
                on[p].push(i);
            }
        }
        on
    }

    /// Smallest superset of `set` containing every line that meets it twice.
    fn subspace_closure(&self, set: &FixedBitSet, lines_on: &[Vec<usize>]) -> FixedBitSet {
        let mut s = set.clone();
        loop {
            let mut changed = false;
            let members: Vec<usize> = s.ones().collect();
            for a in members {
                for &li in &lines_on[a] {
                    let line = &self.lines[li];
                    let inside = line.iter().filter(|&&q| s.contains(q)).count();
                    if inside >= 2 && inside < line.len() {
                        for &q in line {
                            s.insert(q);
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                return s;
            }
        }
    }
}

/// Properties of a point-line space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub points: usize,
    pub lines: usize,
    pub connected: bool,
    pub partial_linear: bool,
    pub gamma: bool,
    pub polar: bool,
    pub thick: bool,
    pub non_degenerate: bool,
    pub singular: bool,
    /// `None` when disconnected.
    pub diameter: Option<usize>,
    /// `None` when the search budget ran out.
    pub singular_rank: Option<usize>,
}

const SINGULAR_RANK_BUDGET: usize = 200_000;

pub fn space_axioms(space: &PointLineSpace) -> AxiomReport {
    let n = space.points;
    let adj = space.collinearity();
    let lines_on = space.lines_on();

    let mut partial_linear = true;
    let mut seen = HashSet::new();
    'pl: for l in &space.lines {
        for (i, &a) in l.iter().enumerate() {
            for &b in &l[i + 1..] {
                if !seen.insert((a.min(b), a.max(b))) {
                    partial_linear = false;
                    break 'pl;
                }
            }
        }
    }

    let (mut gamma, mut polar) = (true, true);
    for l in &space.lines {
        let mut on = FixedBitSet::with_capacity(n);
        for &q in l {
            on.insert(q);
        }
        for p in 0..n {
            if on.contains(p) {
                continue;
            }
            let c = l.iter().filter(|&&q| adj[p].contains(q)).count();
            if !(c <= 1 || c == l.len()) {
                gamma = false;
            }
            if !(c == 1 || c == l.len()) {
                polar = false;
            }
        }
    }

    let thick = space.lines.iter().all(|l| l.len() >= 3) && lines_on.iter().all(|on| on.len() >= 3);
    let non_degenerate = (0..n).all(|p| adj[p].count_ones(..) + 1 < n);
    let singular = (0..n).all(|p| adj[p].count_ones(..) + 1 == n);

    let neighbours: Vec<Vec<usize>> = adj.iter().map(|a| a.ones().collect()).collect();
    let mut diameter = Some(0);
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &neighbours[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if dist.contains(&usize::MAX) {
            diameter = None;
            break;
        }
        diameter = diameter.map(|d: usize| d.max(*dist.iter().max().unwrap_or(&0)));
    }
    let connected = diameter.is_some();

    AxiomReport {
        points: n,
        lines: space.lines.len(),
        connected,
        partial_linear,
        gamma,
        polar,
        thick,
        non_degenerate,
        singular,
        diameter,
        singular_rank: singular_rank(space, &adj, &lines_on, None, SINGULAR_RANK_BUDGET),
    }
}

/// Longest chain of singular subspaces starting at a point, within `within` if given.
fn singular_rank(
    space: &PointLineSpace,
    adj: &[FixedBitSet],
    lines_on: &[Vec<usize>],
    within: Option<&FixedBitSet>,
    budget: usize,
) -> Option<usize> {
    let n = space.points;
    let allowed = |p: usize| within.is_none_or(|w| w.contains(p));
    let mut memo: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut best = 0;
    let mut stack: Vec<FixedBitSet> = Vec::new();
    for p in (0..n).filter(|&p| allowed(p)) {
        let mut s = FixedBitSet::with_capacity(n);
        s.insert(p);
        stack.push(s);
    }
    // Depth-first over singular subspaces; memo holds the depth at which each was reached.
    let mut depth_of: HashMap<FixedBitSet, usize> = HashMap::new();
    for s in &stack {
        depth_of.insert(s.clone(), 0);
    }
    while let Some(s) = stack.pop() {
        let d = depth_of[&s];
        if memo.get(&s).is_some_and(|&m| m >= d) {
            continue;
        }
        memo.insert(s.clone(), d);
        if memo.len() > budget {
            return None;
        }
        best = best.max(d);
        let mut common = FixedBitSet::with_capacity(n);
        common.insert_range(..);
        for q in s.ones() {
            common.intersect_with(&adj[q]);
        }
        common.difference_with(&s);
        for z in common.ones().filter(|&z| allowed(z)) {
            let mut t = s.clone();
            t.insert(z);
            let t = space.subspace_closure(&t, lines_on);
            let members: Vec<usize> = t.ones().collect();
            let clique = members.iter().all(|&a| members.iter().all(|&b| a == b || adj[a].contains(b)));
            if !clique || !members.iter().all(|&m| allowed(m)) {
                continue;
            }
            if depth_of.get(&t).is_some_and(|&old| old >= d + 1) {
                continue;
            }
            depth_of.insert(t.clone(), d + 1);
            stack.push(t);
        }
    }
    Some(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SymplectonBranch {
    /// Convex closure in the space of lines.
    ConvexClosure,
    /// Points commuting with everything that commutes with both generators; used when there are no lines.
    DoubleCommutant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Symplecton {
    pub points: Vec<usize>,
    pub pair: (usize, usize),
    pub branch: SymplectonBranch,
}

/// Shape of a set of extremal points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SetClass {
    Point,
    Singular { rank: usize },
    Symplecton,
    /// Convex, diameter 2, every pair at distance 2 inside a symplecton of the set.
    StrongParapolar,
    Other { failed: String },
}

/// The extremal points of an algebra with their pairwise relations and lines.
#[derive(Clone, Debug)]
pub struct ExtremalGeometry {
    points: PointSet,
    relation: Vec<u8>,
    lines: Vec<Vec<usize>>,
    lines_on: Vec<Vec<usize>>,
    collinear: Vec<FixedBitSet>,
    commuting: Vec<FixedBitSet>,
    lines_exist: bool,
    anomalies: Vec<(usize, usize)>,
    partial_lines: usize,
}

/// Largest point set for which all pairwise relations are stored.
pub const MAX_GEOMETRY_POINTS: usize = 40_000;

/// Classify every pair of points and collect the lines of strongly commuting pencils.
pub fn build_space(points: &PointSet) -> Result<ExtremalGeometry> {
    build_space_with(points, None)
}

/// [`build_space`] with the existence of lines in the whole algebra supplied by the caller.
/// Without it, an incomplete point set without lines triggers a sampled search.
pub fn build_space_with(points: &PointSet, lines_exist: Option<bool>) -> Result<ExtremalGeometry> {
    let n = points.len();
    if n > MAX_GEOMETRY_POINTS {
        return Err(Error::Infeasible(format!("{n} points exceed the {MAX_GEOMETRY_POINTS}-point limit for pairwise geometry")));
    }
    let l = points.algebra();
    let (ar, t) = mod_parts(l)?;
    let p = ar.modulus();
    let ads: Vec<Vec<u32>> = points.coords.par_iter().map(|c| t.ad(&ar, c)).collect();
    let params = pencil_params(&ar);
    type Row = (Vec<u8>, Vec<usize>, Vec<Vec<usize>>, usize);
    let rows: Vec<Result<Row>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = &points.coords[i];
            let mut codes = vec![0u8; n];
            let mut anomalies = Vec::new();
            let mut lines = Vec::new();
            let mut partial = 0;
            for j in i + 1..n {
                let y = &points.coords[j];
                let d = decide(
                    &ar,
                    x,
                    y,
                    &|v| matvec(p, &ads[i], v),
                    &|v| matvec(p, &ads[j], v),
                    &|v| points.lookup(v).is_some() || (!points.saturated && t.extremal_purity(&ar, v).is_some()),
                )
                .ok_or_else(|| Error::Infeasible(format!("points {i} and {j} fit none of the five relations")))?;
                codes[j] = d.relation.code();
                if d.anomaly {
                    anomalies.push(j);
                }
                if d.relation == Relation::StronglyCommuting {
                    let mut ids = vec![i, j];
                    let mut whole = true;
                    for s in &params {
                        match points.lookup(&combine(&ar, x, s, y)) {
                            Some(k) => ids.push(k),
                            None => whole = false,
                        }
                    }
                    ids.sort_unstable();
                    if !whole {
                        partial += 1;
                    } else if ids[0] == i && ids[1] == j {
                        lines.push(ids);
                    }
                }
            }
            Ok((codes, anomalies, lines, partial))
        })
        .collect();
    let mut relation = vec![0u8; n * n];
    let mut lines = Vec::new();
    let mut anomalies = Vec::new();
    let mut partial_lines = 0;
    for (i, row) in rows.into_iter().enumerate() {
        let (codes, anom, ls, partial) = row?;
        for j in i + 1..n {
            relation[i * n + j] = codes[j];
            relation[j * n + i] = codes[j];
        }
        anomalies.extend(anom.into_iter().map(|j| (i, j)));
        lines.extend(ls);
        partial_lines += partial;
    }
    let mut collinear = vec![FixedBitSet::with_capacity(n); n];
    let mut commuting = vec![FixedBitSet::with_capacity(n); n];
    for i in 0..n {
        for j in 0..n {
            let r = Relation::from_code(relation[i * n + j]).expect("valid code");
            if i != j && r == Relation::StronglyCommuting {
                collinear[i].insert(j);
            }
            if r.is_commuting() {
                commuting[i].insert(j);
            }
        }
    }
    let mut lines_on = vec![Vec::new(); n];
    for (li, line) in lines.iter().enumerate() {
        for &q in line {
            lines_on[q].push(li);
        }
    }
    let lines_exist = if !lines.is_empty() {
        true
    } else if let Some(known) = lines_exist {
        known
    } else if points.coverage == Coverage::Complete {
        false
    } else {
        detect_lines(l, 10_000, 0x11e5)?
    };
    Ok(ExtremalGeometry {
        points: points.clone(),
        relation,
        lines,
        lines_on,
        collinear,
        commuting,
        lines_exist,
        anomalies,
        partial_lines,
    })
}

impl ExtremalGeometry {
    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn relation(&self, i: usize, j: usize) -> Relation {
        Relation::from_code(self.relation[i * self.len() + j]).expect("valid code")
    }

    /// Lines of strongly commuting pencils, as sorted point ids.
    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    /// Whether the algebra has strongly commuting pairs at all (not only within this point set).
    pub fn lines_exist(&self) -> bool {
        self.lines_exist
    }

    /// Pairs settled by the span test after `g(x, y) = 0`.
    pub fn anomalies(&self) -> &[(usize, usize)] {
        &self.anomalies
    }

    /// Strongly commuting pairs whose pencil is not fully inside the point set.
    pub fn partial_lines(&self) -> usize {
        self.partial_lines
    }

    pub fn collinear(&self, i: usize, j: usize) -> bool {
        self.collinear[i].contains(j)
    }

    /// Count of each relation over unordered pairs of distinct points.
    pub fn relation_counts(&self) -> [usize; 5] {
        let n = self.len();
        let mut counts = [0; 5];
        for i in 0..n {
            for j in i + 1..n {
                counts[self.relation[i * n + j] as usize] += 1;
            }
        }
        counts
    }

    /// `(𝓔, 𝓕)`.
    pub fn line_space(&self) -> PointLineSpace {
        PointLineSpace { points: self.len(), lines: self.lines.clone() }
    }

    /// `(𝓔, 𝓢)`, with all symplecta as lines.
    pub fn symplecton_space(&self) -> Result<PointLineSpace> {
        Ok(PointLineSpace { points: self.len(), lines: self.symplecta()?.into_iter().map(|s| s.points).collect() })
    }

    pub fn symplecton(&self, x: usize, y: usize) -> Result<Symplecton> {
        if self.relation(x, y) != Relation::Polar {
            return Err(Error::Precondition(format!("points {x} and {y} are not polar")));
        }
        let n = self.len();
        let (set, branch) = if self.lines_exist {
            if self.points.coverage == Coverage::Truncated {
                return Err(Error::Truncated(n));
            }
            (self.convex_closure(x, y), SymplectonBranch::ConvexClosure)
        } else {
            if self.points.coverage != Coverage::Complete {
                return Err(Error::Truncated(n));
            }
            (self.double_commutant(x, y), SymplectonBranch::DoubleCommutant)
        };
        Ok(Symplecton { points: set.ones().collect(), pair: (x, y), branch })
    }

    fn convex_closure(&self, x: usize, y: usize) -> FixedBitSet {
        let n = self.len();
        let mut s = FixedBitSet::with_capacity(n);
        s.insert(x);
        s.insert(y);
        loop {
            let before = s.count_ones(..);
            s = self.line_closure(&s);
            for z in 0..n {
                if s.contains(z) {
                    continue;
                }
                let mut nb = self.collinear[z].clone();
                nb.intersect_with(&s);
                let two_apart = nb.ones().any(|a| {
                    let mut rest = nb.clone();
                    rest.difference_with(&self.collinear[a]);
                    rest.set(a, false);
                    rest.count_ones(..) > 0
                });
                if two_apart {
                    s.insert(z);
                }
            }
            if s.count_ones(..) == before {
                return s;
            }
        }
    }

    fn line_closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut s = set.clone();
        loop {
            let mut changed = false;
            let members: Vec<usize> = s.ones().collect();
            for a in members {
                for &li in &self.lines_on[a] {
                    let line = &self.lines[li];
                    let inside = line.iter().filter(|&&q| s.contains(q)).count();
                    if inside >= 2 && inside < line.len() {
                        for &q in line {
                            s.insert(q);
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                return s;
            }
        }
    }

    fn double_commutant(&self, x: usize, y: usize) -> FixedBitSet {
        let n = self.len();
        let mut w = self.commuting[x].clone();
        w.intersect_with(&self.commuting[y]);
        let mut s = FixedBitSet::with_capacity(n);
        for z in 0..n {
            if w.is_subset(&self.commuting[z]) {
                s.insert(z);
            }
        }
        s
    }

    /// All distinct symplecta of polar pairs in the point set.
    pub fn symplecta(&self) -> Result<Vec<Symplecton>> {
        let n = self.len();
        let mut found: Vec<Symplecton> = Vec::new();
        let mut member: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                if self.relation(i, j) != Relation::Polar {
                    continue;
                }
                // A symplecton is generated by any of its polar pairs.
                if member[i].iter().any(|s| member[j].contains(s)) {
                    continue;
                }
                let s = self.symplecton(i, j)?;
                let id = found.len();
                for &q in &s.points {
                    member[q].push(id);
                }
                found.push(s);
            }
        }
        Ok(found)
    }

    fn is_line_subspace(&self, s: &FixedBitSet) -> bool {
        self.line_closure(s) == *s
    }

    /// Classify a subspace given by point ids.
    pub fn classify_extremal_set(&self, ids: &[usize]) -> Result<SetClass> {
        let n = self.len();
        if ids.is_empty() {
            return Err(Error::Precondition("empty point set".into()));
        }
        let mut s = FixedBitSet::with_capacity(n);
        for &i in ids {
            if i >= n {
                return Err(Error::Precondition(format!("point id {i} out of range")));
            }
            s.insert(i);
        }
        if !self.is_line_subspace(&s) {
            return Err(Error::Precondition("set is not a subspace".into()));
        }
        let members: Vec<usize> = s.ones().collect();
        if members.len() == 1 {
            return Ok(SetClass::Point);
        }
        let pairs = || members.iter().enumerate().flat_map(|(k, &a)| members[k + 1..].iter().map(move |&b| (a, b)));
        let polar_pair = pairs().find(|&(a, b)| self.relation(a, b) == Relation::Polar);
        if self.lines_exist {
            if pairs().all(|(a, b)| self.collinear(a, b)) {
                return Ok(SetClass::Singular { rank: self.rank_within(&s, false) });
            }
            if let Some((a, b)) = polar_pair {
                if self.symplecton(a, b)?.points == members {
                    return Ok(SetClass::Symplecton);
                }
            }
            Ok(match self.parapolar_failure(&s, &members)? {
                None => SetClass::StrongParapolar,
                Some(failed) => SetClass::Other { failed },
            })
        } else {
            if let Some((a, b)) = pairs().find(|&(a, b)| !self.relation(a, b).is_commuting()) {
                return Ok(SetClass::Other { failed: format!("points {a} and {b} do not commute") });
            }
            if let Some((a, b)) = polar_pair {
                if self.symplecton(a, b)?.points == members {
                    return Ok(SetClass::Symplecton);
                }
            }
            Ok(SetClass::Singular { rank: self.rank_within(&s, true) })
        }
    }

    /// Length of a maximal chain of singular subspaces inside `s`, growing one point at a time.
    fn rank_within(&self, s: &FixedBitSet, by_symplecta: bool) -> usize {
        let first = match s.ones().next() {
            Some(f) => f,
            None => return 0,
        };
        let mut current = FixedBitSet::with_capacity(self.len());
        current.insert(first);
        let mut rank = 0;
        while let Some(z) = s.ones().find(|&z| !current.contains(z)) {
            current.insert(z);
            current = if by_symplecta { self.symplectic_closure(&current) } else { self.line_closure(&current) };
            rank += 1;
        }
        rank
    }

    /// Closure under symplecta of polar pairs.
    fn symplectic_closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut s = set.clone();
        loop {
            let members: Vec<usize> = s.ones().collect();
            let mut changed = false;
            for (k, &a) in members.iter().enumerate() {
                for &b in &members[k + 1..] {
                    if self.relation(a, b) == Relation::Polar {
                        if let Ok(sym) = self.symplecton(a, b) {
                            for q in sym.points {
                                changed |= !s.put(q);
                            }
                        }
                    }
                }
            }
            if !changed {
                return s;
            }
        }
    }

    /// First failed property of a strong parapolar subspace of diameter 2, if any.
    fn parapolar_failure(&self, s: &FixedBitSet, members: &[usize]) -> Result<Option<String>> {
        for (k, &a) in members.iter().enumerate() {
            for &b in &members[k + 1..] {
                if self.collinear(a, b) {
                    continue;
                }
                let mut common = self.collinear[a].clone();
                common.intersect_with(&self.collinear[b]);
                if common.count_ones(..) == 0 {
                    return Ok(Some(format!("points {a} and {b} are at distance greater than 2")));
                }
                if !common.is_subset(s) {
                    return Ok(Some(format!("not convex: a common neighbour of {a} and {b} lies outside")));
                }
                if self.relation(a, b) != Relation::Polar {
                    return Ok(Some(format!("points {a} and {b} at distance 2 are not polar")));
                }
                let sym = self.symplecton(a, b)?;
                if !sym.points.iter().all(|&q| s.contains(q)) {
                    return Ok(Some(format!("symplecton of {a} and {b} is not contained")));
                }
            }
        }
        Ok(None)
    }

    pub fn export(&self, with_relation: bool) -> Result<GeometryExport> {
        let n = self.len();
        let space = if self.lines_exist { self.line_space() } else { self.symplecton_space()? };
        Ok(GeometryExport {
            algebra: self.points.algebra.label().to_string(),
            field: self.points.algebra.field().to_string(),
            coverage: self.points.coverage,
            lines_exist: self.lines_exist,
            points: self.points.coords.clone(),
            lines: space.lines.clone(),
            relation: with_relation.then(|| (0..n).map(|i| self.relation[i * n..(i + 1) * n].to_vec()).collect()),
            axioms: space_axioms(&space),
        })
    }
}

/// JSON form of a geometry; `lines` are symplecta when the algebra has no lines.
#[derive(Clone, Debug, Serialize)]
pub struct GeometryExport {
    pub algebra: String,
    pub field: String,
    pub coverage: Coverage,
    pub lines_exist: bool,
    pub points: Vec<Vec<u32>>,
    pub lines: Vec<Vec<usize>>,
    pub relation: Option<Vec<Vec<u8>>>,
    pub axioms: AxiomReport,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::MatrixAlgebra;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn point(m: &MatrixAlgebra, i: usize, j: usize) -> ExtremalPoint {
        ExtremalPoint::new(&m.matrix_unit(i, j).unwrap()).unwrap()
    }

    #[test]
    fn sl_pair_examples() {
        let sl3 = MatrixAlgebra::sl(3, gf(5)).unwrap();
        let e12 = point(&sl3, 1, 2);
        let two = ExtremalPoint::new(&e12.element().scale_i64(2)).unwrap();
        assert_eq!(classify_pair(&e12, &two).unwrap().relation, Relation::SamePoint);
        assert_eq!(classify_pair(&e12, &point(&sl3, 1, 3)).unwrap().relation, Relation::StronglyCommuting);
        let special = classify_pair(&e12, &point(&sl3, 2, 3)).unwrap();
        assert_eq!(special.relation, Relation::Special);
        assert_eq!(special.bracket.unwrap(), sl3.matrix_unit(1, 3).unwrap());
        let sl4 = MatrixAlgebra::sl(4, gf(5)).unwrap();
        assert_eq!(classify_pair(&point(&sl4, 1, 2), &point(&sl4, 3, 4)).unwrap().relation, Relation::Polar);
        let sl2 = MatrixAlgebra::sl(2, gf(5)).unwrap();
        let h = classify_pair(&point(&sl2, 1, 2), &point(&sl2, 2, 1)).unwrap();
        assert_eq!(h.relation, Relation::Hyperbolic);
        // [e,[e,f]] = [e,h] = -2e, so g = -1
        assert_eq!(h.g.unwrap(), FieldScalar::from_i64(gf(5), -1));
    }

    #[test]
    fn rational_pencil_test() {
        let sl3 = MatrixAlgebra::sl(3, Field::Rational).unwrap();
        assert_eq!(classify_pair(&point(&sl3, 1, 2), &point(&sl3, 1, 3)).unwrap().relation, Relation::StronglyCommuting);
        let sl4 = MatrixAlgebra::sl(4, Field::Rational).unwrap();
        assert_eq!(classify_pair(&point(&sl4, 1, 2), &point(&sl4, 3, 4)).unwrap().relation, Relation::Polar);
    }

    #[test]
    fn sl2_orbit_and_empty_lines() {
        let sl2 = MatrixAlgebra::sl(2, gf(5)).unwrap();
        let pts = enumerate_extremal_points(sl2.algebra(), &[point(&sl2, 1, 2)], 1000).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts.coverage(), Coverage::Complete);
        let geo = build_space(&pts).unwrap();
        assert!(geo.lines().is_empty());
        assert_eq!(geo.relation_counts()[Relation::Hyperbolic as usize], 15);
    }

    #[test]
    fn cap_truncates() {
        let sl3 = MatrixAlgebra::sl(3, gf(5)).unwrap();
        let pts = enumerate_extremal_points(sl3.algebra(), &[], 50).unwrap();
        assert_eq!(pts.len(), 50);
        assert_eq!(pts.coverage(), Coverage::Truncated);
        assert!(enumerate_extremal_points(sl3.algebra(), &[], 0).is_err());
    }

    #[test]
    fn single_line_axioms() {
        let space = PointLineSpace::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
        let r = space_axioms(&space);
        assert!(r.singular && r.connected && r.partial_linear);
        assert_eq!(r.diameter, Some(1));
        assert_eq!(r.singular_rank, Some(1));
    }
}
