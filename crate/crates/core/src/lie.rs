//! Lie algebras given by structure constants, their elements, and the
//! extremal-element calculus.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dual::{dual, Backend, Dual, VecData};
use crate::error::{Error, Result};
use crate::field::{Arith, Field, FieldScalar, ModArith, RatArith};
use crate::linalg::kernels::{self, Echelon};
use crate::linalg::{ExactMatrix, Subspace, Vector};

/// Sparse structure constants: `[e_i, e_j] = Σ_k c(i,j,k) e_k`, stored for all ordered pairs.
#[derive(Clone, Debug)]
pub(crate) struct Tensor<A: Arith> {
    pub dim: usize,
    offsets: Vec<usize>,
    entries: Vec<(u32, A::E)>,
}

impl<A: Arith> Tensor<A> {
    fn from_map(ar: &A, dim: usize, map: &BTreeMap<(usize, usize), BTreeMap<usize, A::E>>) -> Self {
        let mut offsets = Vec::with_capacity(dim * dim + 1);
        let mut entries = Vec::new();
        offsets.push(0);
        for i in 0..dim {
            for j in 0..dim {
                if let Some(row) = map.get(&(i, j)) {
                    for (&k, c) in row {
                        if !ar.is_zero(c) {
                            entries.push((k as u32, c.clone()));
                        }
                    }
                }
                offsets.push(entries.len());
            }
        }
        Tensor { dim, offsets, entries }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &[(u32, A::E)] {
        let idx = i * self.dim + j;
        &self.entries[self.offsets[idx]..self.offsets[idx + 1]]
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn bracket(&self, ar: &A, x: &[A::E], y: &[A::E]) -> Vec<A::E> {
        let mut out = vec![ar.zero(); self.dim];
        let ys: Vec<usize> = (0..self.dim).filter(|&j| !ar.is_zero(&y[j])).collect();
        for (i, xi) in x.iter().enumerate() {
            if ar.is_zero(xi) {
                continue;
            }
            for &j in &ys {
                let sc = self.get(i, j);
                if sc.is_empty() {
                    continue;
                }
                let w = ar.mul(xi, &y[j]);
                for (k, c) in sc {
                    ar.mul_add(&mut out[*k as usize], &w, c);
                }
            }
        }
        out
    }

    /// `[x, e_j]`
    pub fn bracket_basis(&self, ar: &A, x: &[A::E], j: usize) -> Vec<A::E> {
        let mut out = vec![ar.zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if ar.is_zero(xi) {
                continue;
            }
            for (k, c) in self.get(i, j) {
                ar.mul_add(&mut out[*k as usize], xi, c);
            }
        }
        out
    }

    /// Dense row-major matrix of `ad_x`; column `j` is `[x, e_j]`.
    pub fn ad(&self, ar: &A, x: &[A::E]) -> Vec<A::E> {
        let n = self.dim;
        let mut m = vec![ar.zero(); n * n];
        for (i, xi) in x.iter().enumerate() {
            if ar.is_zero(xi) {
                continue;
            }
            for j in 0..n {
                for (k, c) in self.get(i, j) {
                    ar.mul_add(&mut m[*k as usize * n + j], xi, c);
                }
            }
        }
        m
    }

    /// `None` when `x` is not extremal, otherwise whether `ad_x^2 ≠ 0`.
    /// Stops at the first `[x,[x,e_k]]` outside `k·x`.
    pub fn extremal_purity(&self, ar: &A, x: &[A::E]) -> Option<bool> {
        if kernels::is_zero(ar, x) {
            return None;
        }
        let mut pure = false;
        for k in 0..self.dim {
            let w = self.bracket_basis(ar, x, k);
            if kernels::is_zero(ar, &w) {
                continue;
            }
            let v = self.bracket(ar, x, &w);
            if kernels::is_zero(ar, &v) {
                continue;
            }
            kernels::ratio(ar, &v, x)?;
            pure = true;
        }
        Some(pure)
    }

    /// Whether `ad_x^2 = 0`.
    pub fn ad_square_vanishes(&self, ar: &A, x: &[A::E]) -> bool {
        (0..self.dim).all(|k| {
            let w = self.bracket_basis(ar, x, k);
            kernels::is_zero(ar, &w) || kernels::is_zero(ar, &self.bracket(ar, x, &w))
        })
    }

    /// Jacobiator of three basis vectors, accumulated into `scratch` (left zeroed).
    fn jacobi_basis(&self, ar: &A, i: usize, j: usize, k: usize, scratch: &mut [A::E], touched: &mut Vec<usize>) -> bool {
        for &(a, b, c) in &[(i, j, k), (j, k, i), (k, i, j)] {
            // [e_a, [e_b, e_c]]
            for (m, c1) in self.get(b, c) {
                for (q, c2) in self.get(a, *m as usize) {
                    let q = *q as usize;
                    ar.mul_add(&mut scratch[q], c1, c2);
                    touched.push(q);
                }
            }
        }
        let mut ok = true;
        for &q in touched.iter() {
            if !ar.is_zero(&scratch[q]) {
                ok = false;
            }
            scratch[q] = ar.zero();
        }
        touched.clear();
        ok
    }
}

pub(crate) type TensorData = Dual<Tensor<ModArith>, Tensor<RatArith>>;

/// How thoroughly the Jacobi identity is checked at construction time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobiCheck {
    /// Every basis triple.
    Full,
    /// Seeded random basis triples.
    Sampled { triples: usize, seed: u64 },
    Skip,
}

impl JacobiCheck {
    /// Full up to dimension 100, otherwise 5000 sampled triples.
    pub fn default_for(dim: usize) -> JacobiCheck {
        if dim <= 100 {
            JacobiCheck::Full
        } else {
            JacobiCheck::Sampled { triples: 5000, seed: 0x5eed }
        }
    }
}

/// Outcome of a Jacobi verification.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct JacobiReport {
    pub mode: String,
    pub triples_checked: u64,
    pub passed: bool,
}

struct Inner {
    label: String,
    field: Field,
    dim: usize,
    sc: TensorData,
    names: Vec<String>,
    simple: bool,
    generators: Vec<Vector>,
}

/// A finite-dimensional Lie algebra; cheap to clone and shared between elements.
#[derive(Clone)]
pub struct LieAlgebra {
    inner: Arc<Inner>,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra({}, dim {})", self.inner.label, self.inner.dim)
    }
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &LieAlgebra) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}

impl Eq for LieAlgebra {}

/// Incremental description of a Lie algebra by brackets of basis vectors.
#[derive(Clone, Debug)]
pub struct AlgebraBuilder {
    field: Field,
    dim: usize,
    label: String,
    names: Vec<String>,
    brackets: BTreeMap<(usize, usize), BTreeMap<usize, FieldScalar>>,
    simple: bool,
    generators: Vec<Vector>,
    check: Option<JacobiCheck>,
}

impl AlgebraBuilder {
    pub fn new(field: Field, dim: usize, label: impl Into<String>) -> AlgebraBuilder {
        AlgebraBuilder {
            field,
            dim,
            label: label.into(),
            names: (0..dim).map(|i| format!("e{}", i + 1)).collect(),
            brackets: BTreeMap::new(),
            simple: false,
            generators: Vec::new(),
            check: None,
        }
    }

    pub fn names(mut self, names: Vec<String>) -> AlgebraBuilder {
        assert_eq!(names.len(), self.dim);
        self.names = names;
        self
    }

    /// Mark the algebra as simple and generated by its extremal elements.
    pub fn simple(mut self, simple: bool) -> AlgebraBuilder {
        self.simple = simple;
        self
    }

    /// Extremal elements whose exponentials generate the relevant group.
    pub fn extremal_generators(mut self, gens: Vec<Vector>) -> AlgebraBuilder {
        self.generators = gens;
        self
    }

    pub fn jacobi_check(mut self, check: JacobiCheck) -> AlgebraBuilder {
        self.check = Some(check);
        self
    }

    /// Record `[e_i, e_j] += c e_k`.
    pub fn add(&mut self, i: usize, j: usize, k: usize, c: FieldScalar) -> Result<()> {
        if i >= self.dim || j >= self.dim || k >= self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: i.max(j).max(k) + 1 });
        }
        if c.field() != self.field {
            return Err(Error::CharacteristicMismatch { left: self.field, right: c.field() });
        }
        let slot = self.brackets.entry((i, j)).or_default().entry(k).or_insert_with(|| self.field.zero());
        *slot = slot.checked_add(&c)?;
        Ok(())
    }

    pub fn add_i64(&mut self, i: usize, j: usize, k: usize, c: i64) -> Result<()> {
        self.add(i, j, k, FieldScalar::from_i64(self.field, c))
    }

    /// Validate antisymmetry, complete the table and check Jacobi.
    pub fn build(self) -> Result<LieAlgebra> {
        let dim = self.dim;
        let mut full: BTreeMap<(usize, usize), BTreeMap<usize, FieldScalar>> = BTreeMap::new();
        for (&(i, j), row) in &self.brackets {
            let row: BTreeMap<usize, FieldScalar> = row.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (*k, c.clone())).collect();
            if i == j {
                if !row.is_empty() {
                    return Err(Error::Precondition(format!("[e{i}, e{i}] must vanish")));
                }
                continue;
            }
            let neg: BTreeMap<usize, FieldScalar> = row.iter().map(|(k, c)| (*k, -c)).collect();
            if let Some(prev) = full.get(&(i, j)) {
                if *prev != row {
                    return Err(Error::Precondition(format!("antisymmetry fails for basis pair ({i}, {j})")));
                }
            }
            full.insert((i, j), row);
            full.insert((j, i), neg);
        }
        let sc = match self.field {
            Field::Prime(p) => {
                let ar = ModArith::new(p);
                let map = convert_map(&full, |c| ar.from_scalar(c))?;
                Dual::Mod(ar, Tensor::from_map(&ar, dim, &map))
            }
            Field::Rational => {
                let ar = RatArith;
                let map = convert_map(&full, |c| ar.from_scalar(c))?;
                Dual::Rat(ar, Tensor::from_map(&ar, dim, &map))
            }
        };
        let alg = LieAlgebra {
            inner: Arc::new(Inner {
                label: self.label,
                field: self.field,
                dim,
                sc,
                names: self.names,
                simple: self.simple,
                generators: self.generators,
            }),
        };
        let check = self.check.unwrap_or_else(|| JacobiCheck::default_for(dim));
        let report = alg.verify_jacobi(check);
        if !report.passed {
            return Err(Error::Precondition(format!("Jacobi identity fails for {}", alg.label())));
        }
        Ok(alg)
    }
}

fn convert_map<E>(
    full: &BTreeMap<(usize, usize), BTreeMap<usize, FieldScalar>>,
    f: impl Fn(&FieldScalar) -> Result<E>,
) -> Result<BTreeMap<(usize, usize), BTreeMap<usize, E>>> {
    full.iter()
        .map(|(key, row)| Ok((*key, row.iter().map(|(k, c)| Ok((*k, f(c)?))).collect::<Result<_>>()?)))
        .collect()
}

impl LieAlgebra {
    pub(crate) fn from_parts(
        label: String,
        field: Field,
        sc: TensorData,
        names: Vec<String>,
        simple: bool,
        generators: Vec<Vector>,
    ) -> LieAlgebra {
        let dim = dual!(&sc, _ar, t => t.dim);
        LieAlgebra { inner: Arc::new(Inner { label, field, dim, sc, names, simple, generators }) }
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn field(&self) -> Field {
        self.inner.field
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.inner.names
    }

    /// Known to be simple and generated by extremal elements.
    pub fn is_simple_extremal_generated(&self) -> bool {
        self.inner.simple
    }

    pub fn extremal_generators(&self) -> Vec<Element> {
        self.inner.generators.iter().map(|v| Element { algebra: self.clone(), coords: v.clone() }).collect()
    }

    pub(crate) fn tensor(&self) -> &TensorData {
        &self.inner.sc
    }

    pub fn structure_constant_count(&self) -> usize {
        dual!(&self.inner.sc, _ar, t => t.nnz())
    }

    /// All nonzero `(i, j, k, c)` with `[e_i, e_j] = ... + c e_k`, for `i < j`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, FieldScalar)> {
        let n = self.dim();
        let mut out = Vec::new();
        dual!(&self.inner.sc, ar, t => {
            for i in 0..n {
                for j in i + 1..n {
                    for (k, c) in t.get(i, j) {
                        out.push((i, j, *k as usize, ar.to_scalar(c)));
                    }
                }
            }
        });
        out
    }

    pub fn verify_jacobi(&self, check: JacobiCheck) -> JacobiReport {
        let n = self.dim();
        dual!(&self.inner.sc, ar, t => {
            let mut scratch = vec![ar.zero(); n];
            let mut touched = Vec::new();
            match check {
                JacobiCheck::Skip => JacobiReport { mode: "skipped".into(), triples_checked: 0, passed: true },
                JacobiCheck::Full => {
                    let mut count = 0u64;
                    let mut passed = true;
                    'outer: for i in 0..n {
                        for j in i + 1..n {
                            for k in j + 1..n {
                                count += 1;
                                if !t.jacobi_basis(ar, i, j, k, &mut scratch, &mut touched) {
                                    passed = false;
                                    break 'outer;
                                }
                            }
                        }
                    }
                    JacobiReport { mode: "full".into(), triples_checked: count, passed }
                }
                JacobiCheck::Sampled { triples, seed } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut passed = true;
                    for _ in 0..triples {
                        let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                        if !t.jacobi_basis(ar, i, j, k, &mut scratch, &mut touched) {
                            passed = false;
                            break;
                        }
                    }
                    JacobiReport { mode: format!("sampled (seed {seed})"), triples_checked: triples as u64, passed }
                }
            }
        })
    }

    pub fn zero(&self) -> Element {
        Element { algebra: self.clone(), coords: Vector::zero(self.field(), self.dim()) }
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element { algebra: self.clone(), coords: Vector::basis(self.field(), self.dim(), i) }
    }

    pub fn basis(&self) -> Vec<Element> {
        (0..self.dim()).map(|i| self.basis_element(i)).collect()
    }

    pub fn element(&self, coords: Vector) -> Result<Element> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: coords.len() });
        }
        if coords.field() != self.field() {
            return Err(Error::CharacteristicMismatch { left: self.field(), right: coords.field() });
        }
        Ok(Element { algebra: self.clone(), coords })
    }

    pub fn element_from_i64(&self, coords: &[i64]) -> Result<Element> {
        self.element(Vector::from_i64(self.field(), coords))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        Element { algebra: self.clone(), coords: Vector::random(self.field(), self.dim(), rng) }
    }

    fn check(&self, x: &Element) -> Result<()> {
        if x.algebra != *self {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        let coords = self.bracket_vec(&x.coords, &y.coords)?;
        Ok(Element { algebra: self.clone(), coords })
    }

    pub(crate) fn bracket_vec(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        let t = &self.inner.sc;
        Ok(Vector(match (t, &x.0, &y.0) {
            (Dual::Mod(ar, t), Dual::Mod(_, xs), Dual::Mod(_, ys)) => Dual::Mod(*ar, t.bracket(ar, xs, ys)),
            (Dual::Rat(ar, t), Dual::Rat(_, xs), Dual::Rat(_, ys)) => Dual::Rat(*ar, t.bracket(ar, xs, ys)),
            _ => return Err(Error::CharacteristicMismatch { left: self.field(), right: x.field() }),
        }))
    }

    pub(crate) fn ad_vec(&self, x: &Vector) -> Result<ExactMatrix> {
        let n = self.dim();
        let data: VecData = match (&self.inner.sc, &x.0) {
            (Dual::Mod(ar, t), Dual::Mod(_, xs)) => Dual::Mod(*ar, t.ad(ar, xs)),
            (Dual::Rat(ar, t), Dual::Rat(_, xs)) => Dual::Rat(*ar, t.ad(ar, xs)),
            _ => return Err(Error::CharacteristicMismatch { left: self.field(), right: x.field() }),
        };
        Ok(ExactMatrix::from_data(n, n, data))
    }

    /// Matrix of `ad_x`; column `k` holds the coordinates of `[x, e_k]`.
    pub fn ad_matrix(&self, x: &Element) -> Result<ExactMatrix> {
        self.check(x)?;
        self.ad_vec(&x.coords)
    }

    /// Least `m` with `ad_x^m = 0`, or `None` when it exceeds `cap`.
    pub fn ad_nilpotency_index(&self, x: &Element, cap: u32) -> Result<Option<u32>> {
        if cap == 0 {
            return Err(Error::Precondition("cap must be at least 1".into()));
        }
        let ad = self.ad_matrix(x)?;
        let mut power = ad.clone();
        for m in 1..=cap {
            if power.is_zero() {
                return Ok(Some(m));
            }
            if m < cap {
                power = power.mul(&ad)?;
            }
        }
        Ok(None)
    }

    pub fn is_extremal(&self, x: &Element) -> Result<bool> {
        self.check(x)?;
        Ok(self.is_extremal_vec(&x.coords))
    }

    pub(crate) fn is_extremal_vec(&self, x: &Vector) -> bool {
        match (&self.inner.sc, &x.0) {
            (Dual::Mod(ar, t), Dual::Mod(_, xs)) => t.extremal_purity(ar, xs).is_some(),
            (Dual::Rat(ar, t), Dual::Rat(_, xs)) => t.extremal_purity(ar, xs).is_some(),
            _ => false,
        }
    }

    /// Extremal with `ad_x^2 ≠ 0`.
    pub fn is_pure_extremal(&self, x: &Element) -> Result<bool> {
        self.check(x)?;
        Ok(match (&self.inner.sc, &x.coords.0) {
            (Dual::Mod(ar, t), Dual::Mod(_, xs)) => t.extremal_purity(ar, xs) == Some(true),
            (Dual::Rat(ar, t), Dual::Rat(_, xs)) => t.extremal_purity(ar, xs) == Some(true),
            _ => unreachable!("checked algebra"),
        })
    }

    fn ad_square_vanishes(&self, x: &Element) -> Result<bool> {
        self.check(x)?;
        Ok(match (&self.inner.sc, &x.coords.0) {
            (Dual::Mod(ar, t), Dual::Mod(_, xs)) => t.ad_square_vanishes(ar, xs),
            (Dual::Rat(ar, t), Dual::Rat(_, xs)) => t.ad_square_vanishes(ar, xs),
            _ => unreachable!("checked algebra"),
        })
    }

    pub fn sandwich_status(&self, x: &Element) -> Result<SandwichStatus> {
        if x.is_zero() {
            return Ok(SandwichStatus::Zero);
        }
        if self.ad_matrix(x)?.is_zero() {
            return Ok(SandwichStatus::Central);
        }
        Ok(if self.ad_square_vanishes(x)? { SandwichStatus::Sandwich } else { SandwichStatus::NotSandwich })
    }

    /// Nonzero, noncentral, with `ad_x^2 = 0`.
    pub fn is_sandwich(&self, x: &Element) -> Result<bool> {
        Ok(self.sandwich_status(x)? == SandwichStatus::Sandwich)
    }

    /// The λ with `ad_x^2 y = 2λx`.
    pub fn extremal_g(&self, x: &ExtremalPoint, y: &Element) -> Result<FieldScalar> {
        self.check(&x.rep)?;
        self.check(y)?;
        let z = self.bracket_vec(&x.rep.coords, &self.bracket_vec(&x.rep.coords, &y.coords)?)?;
        if z.is_zero() {
            return Ok(self.field().zero());
        }
        let lambda = z.ratio_to(&x.rep.coords).ok_or(Error::NotExtremal)?;
        lambda.checked_div(&FieldScalar::from_i64(self.field(), 2))
    }

    /// Intersection of the kernels of all `ad(e_i)`.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        let field = self.field();
        // Two random adjoint kernels cut the candidates down before the exact test.
        let mut rng = ChaCha8Rng::seed_from_u64(0xce47e5);
        let r1 = Vector::random(field, n, &mut rng);
        let r2 = Vector::random(field, n, &mut rng);
        let m1 = self.ad_vec(&r1).expect("same field");
        let m2 = self.ad_vec(&r2).expect("same field");
        let mut rows = m1.transpose().columns();
        rows.extend(m2.transpose().columns());
        let stacked = ExactMatrix::from_rows(field, n, &rows).expect("shape");
        let candidates = stacked.kernel().basis();
        if candidates.is_empty() {
            return Subspace::zero(field, n);
        }
        let m = candidates.len();
        let data = dual!(&self.inner.sc, ar, t => {
            let cand: Vec<Vec<_>> = candidates.iter().map(|v| vector_payload(ar, v)).collect();
            let mut e = Echelon::<_>::new(m);
            'fill: for i in 0..n {
                let images: Vec<Vec<_>> = cand.iter().map(|c| t.bracket_basis(ar, c, i)).collect();
                for k in 0..n {
                    let row: Vec<_> = images.iter().map(|img| ar.neg(&img[k])).collect();
                    if !kernels::is_zero(ar, &row) {
                        e.insert(ar, row);
                        if e.dim() == m {
                            break 'fill;
                        }
                    }
                }
            }
            let mut centre = Echelon::new(n);
            for coeffs in e.null_space(ar) {
                let mut z = vec![ar.zero(); n];
                for (c, v) in coeffs.iter().zip(&cand) {
                    kernels::axpy(ar, &mut z, c, v);
                }
                centre.insert(ar, z);
            }
            ar.wrap_echelon(centre)
        });
        Subspace::from_data(n, data)
    }

    /// The quotient by the center, with the projection retained.
    pub fn simple_quotient(&self) -> Result<QuotientMap> {
        let center = self.center();
        let free = center.free_columns();
        let n = self.dim();
        let label = if center.is_zero() { self.label().to_string() } else { format!("{} / center", self.label()) };
        let names: Vec<String> = free.iter().map(|&f| self.inner.names[f].clone()).collect();
        let m = free.len();
        let sc = match (&self.inner.sc, &center.data) {
            (Dual::Mod(ar, t), Dual::Mod(_, e)) => Dual::Mod(*ar, quotient_tensor(ar, t, e, &free)),
            (Dual::Rat(ar, t), Dual::Rat(_, e)) => Dual::Rat(*ar, quotient_tensor(ar, t, e, &free)),
            _ => unreachable!("center lives in the same field"),
        };
        let generators = self
            .inner
            .generators
            .iter()
            .map(|g| center.quotient_coordinates(g))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|g| !g.is_zero())
            .collect();
        let target = LieAlgebra::from_parts(label, self.field(), sc, names, self.inner.simple || !center.is_zero(), generators);
        debug_assert_eq!(target.dim(), m);
        let _ = n;
        Ok(QuotientMap { source: self.clone(), target, center })
    }
}

fn vector_payload<A: Backend>(_ar: &A, v: &Vector) -> Vec<A::E> {
    A::unwrap_vec(&v.0).expect("field mismatch").clone()
}

fn quotient_tensor<A: Arith>(ar: &A, t: &Tensor<A>, center: &Echelon<A>, free: &[usize]) -> Tensor<A> {
    let m = free.len();
    let mut map: BTreeMap<(usize, usize), BTreeMap<usize, A::E>> = BTreeMap::new();
    for (a, &fa) in free.iter().enumerate() {
        for (b, &fb) in free.iter().enumerate() {
            let sc = t.get(fa, fb);
            if sc.is_empty() {
                continue;
            }
            let mut v = vec![ar.zero(); t.dim];
            for (k, c) in sc {
                v[*k as usize] = c.clone();
            }
            let q = center.quotient_coords(ar, &v);
            let row: BTreeMap<usize, A::E> = q.into_iter().enumerate().filter(|(_, c)| !ar.is_zero(c)).collect();
            if !row.is_empty() {
                map.insert((a, b), row);
            }
        }
    }
    Tensor::from_map(ar, m, &map)
}

/// Projection `L → L / Z(L)` onto the coordinates complementary to the center.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub source: LieAlgebra,
    pub target: LieAlgebra,
    pub center: Subspace,
}

impl QuotientMap {
    pub fn project(&self, x: &Element) -> Result<Element> {
        if x.algebra != self.source {
            return Err(Error::AlgebraMismatch);
        }
        self.target.element(self.center.quotient_coordinates(&x.coords)?)
    }

    pub fn is_identity(&self) -> bool {
        self.center.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SandwichStatus {
    Zero,
    Central,
    Sandwich,
    NotSandwich,
}

/// A vector of a specific Lie algebra.
#[derive(Clone, Debug)]
pub struct Element {
    algebra: LieAlgebra,
    coords: Vector,
}

impl PartialEq for Element {
    fn eq(&self, other: &Element) -> bool {
        self.algebra == other.algebra && self.coords == other.coords
    }
}

impl Eq for Element {}

impl Element {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &Vector {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    fn same(&self, other: &Element) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same(other)?;
        Ok(Element { algebra: self.algebra.clone(), coords: self.coords.add(&other.coords)? })
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.same(other)?;
        Ok(Element { algebra: self.algebra.clone(), coords: self.coords.sub(&other.coords)? })
    }

    pub fn neg(&self) -> Element {
        Element { algebra: self.algebra.clone(), coords: self.coords.neg() }
    }

    pub fn scale(&self, s: &FieldScalar) -> Result<Element> {
        Ok(Element { algebra: self.algebra.clone(), coords: self.coords.scale(s)? })
    }

    pub fn scale_i64(&self, s: i64) -> Element {
        self.scale(&FieldScalar::from_i64(self.algebra.field(), s)).expect("same field")
    }

    pub fn bracket(&self, other: &Element) -> Result<Element> {
        self.algebra.bracket(self, other)
    }

    /// `[self, [self, y]]`
    pub fn ad2(&self, y: &Element) -> Result<Element> {
        self.bracket(&self.bracket(y)?)
    }

    pub fn normalized(&self) -> Element {
        Element { algebra: self.algebra.clone(), coords: self.coords.normalized() }
    }

    pub fn is_proportional(&self, other: &Element) -> bool {
        self.algebra == other.algebra && self.coords.is_proportional(&other.coords)
    }

    /// Readable sum of basis names.
    pub fn display(&self) -> String {
        let names = self.algebra.basis_names();
        let mut terms = Vec::new();
        for (i, c) in self.coords.to_scalars().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                terms.push(names[i].clone());
            } else {
                terms.push(format!("{}*{}", c, names[i]));
            }
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// A certified pure extremal element, normalized so its first nonzero coordinate is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalPoint {
    rep: Element,
}

impl ExtremalPoint {
    pub fn new(x: &Element) -> Result<ExtremalPoint> {
        if !x.algebra.is_pure_extremal(x)? {
            return Err(Error::NotExtremal);
        }
        Ok(ExtremalPoint { rep: x.normalized() })
    }

    /// Skip the extremality test; callers must already know the element is pure extremal.
    pub(crate) fn new_unchecked(x: Element) -> ExtremalPoint {
        ExtremalPoint { rep: x.normalized() }
    }

    pub fn element(&self) -> &Element {
        &self.rep
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.rep.algebra
    }
}
