//! Dense exact linear algebra: vectors, matrices and subspaces in reduced
//! row-echelon form.

use rand::Rng;

use crate::dual::{dual, dual2, dual2_map, dual_map, with_field, Dual, VecData, Backend};
use crate::error::{Error, Result};
use crate::field::{Arith, Field, FieldScalar};

/// Generic kernels on raw coordinate slices.
pub(crate) mod kernels {
    use crate::field::Arith;

    /// `y += a * x`
    #[inline]
    pub fn axpy<A: Arith>(ar: &A, y: &mut [A::E], a: &A::E, x: &[A::E]) {
        if ar.is_zero(a) {
            return;
        }
        for (yi, xi) in y.iter_mut().zip(x) {
            if !ar.is_zero(xi) {
                ar.mul_add(yi, a, xi);
            }
        }
    }

    pub fn scale<A: Arith>(ar: &A, x: &mut [A::E], a: &A::E) {
        for xi in x.iter_mut() {
            if !ar.is_zero(xi) {
                *xi = ar.mul(xi, a);
            }
        }
    }

    pub fn is_zero<A: Arith>(ar: &A, x: &[A::E]) -> bool {
        x.iter().all(|e| ar.is_zero(e))
    }

    pub fn first_nonzero<A: Arith>(ar: &A, x: &[A::E]) -> Option<usize> {
        x.iter().position(|e| !ar.is_zero(e))
    }

    /// Scale so the first nonzero coordinate is one.
    pub fn normalize<A: Arith>(ar: &A, x: &mut [A::E]) -> bool {
        match first_nonzero(ar, x) {
            None => false,
            Some(i) => {
                if !ar.is_one(&x[i]) {
                    let inv = ar.inv(&x[i]).expect("nonzero");
                    scale(ar, x, &inv);
                }
                true
            }
        }
    }

    /// The λ with `y = λ x`, if any.
    pub fn ratio<A: Arith>(ar: &A, y: &[A::E], x: &[A::E]) -> Option<A::E> {
        let i = first_nonzero(ar, x)?;
        let ratio = ar.mul(&y[i], &ar.inv(&x[i]).expect("nonzero"));
        if y.iter().zip(x).all(|(yj, xj)| *yj == ar.mul(&ratio, xj)) {
            Some(ratio)
        } else {
            None
        }
    }

    /// Row-major `rows x inner` times `inner x cols`.
    pub fn matmul<A: Arith>(ar: &A, a: &[A::E], b: &[A::E], rows: usize, inner: usize, cols: usize) -> Vec<A::E> {
        let mut out = vec![ar.zero(); rows * cols];
        for i in 0..rows {
            let out_row = &mut out[i * cols..(i + 1) * cols];
            for j in 0..inner {
                let aij = &a[i * inner + j];
                if !ar.is_zero(aij) {
                    axpy(ar, out_row, aij, &b[j * cols..(j + 1) * cols]);
                }
            }
        }
        out
    }

    pub fn matvec<A: Arith>(ar: &A, a: &[A::E], x: &[A::E], rows: usize, cols: usize) -> Vec<A::E> {
        let mut out = vec![ar.zero(); rows];
        for (j, xj) in x.iter().enumerate().take(cols) {
            if ar.is_zero(xj) {
                continue;
            }
            for (i, oi) in out.iter_mut().enumerate() {
                let aij = &a[i * cols + j];
                if !ar.is_zero(aij) {
                    ar.mul_add(oi, aij, xj);
                }
            }
        }
        out
    }

    /// Reduced row-echelon basis of a row space.
    #[derive(Clone, Debug, PartialEq, Eq, Hash)]
    pub struct Echelon<A: Arith> {
        pub cols: usize,
        pub rows: Vec<Vec<A::E>>,
        pub pivots: Vec<usize>,
    }

    impl<A: Arith> Echelon<A> {
        pub fn new(cols: usize) -> Self {
            Echelon { cols, rows: Vec::new(), pivots: Vec::new() }
        }

        pub fn dim(&self) -> usize {
            self.rows.len()
        }

        /// Eliminate every pivot coordinate of `v`.
        pub fn reduce(&self, ar: &A, v: &mut [A::E]) {
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !ar.is_zero(&v[p]) {
                    let c = ar.neg(&v[p]);
                    axpy(ar, v, &c, row);
                }
            }
        }

        pub fn contains(&self, ar: &A, v: &[A::E]) -> bool {
            let mut w = v.to_vec();
            self.reduce(ar, &mut w);
            is_zero(ar, &w)
        }

        /// Add `v` to the span; returns false when it was already inside.
        pub fn insert(&mut self, ar: &A, mut v: Vec<A::E>) -> bool {
            self.reduce(ar, &mut v);
            let p = match first_nonzero(ar, &v) {
                None => return false,
                Some(p) => p,
            };
            normalize(ar, &mut v);
            for row in self.rows.iter_mut() {
                if !ar.is_zero(&row[p]) {
                    let c = ar.neg(&row[p]);
                    axpy(ar, row, &c, &v);
                }
            }
            let at = self.pivots.partition_point(|&q| q < p);
            self.pivots.insert(at, p);
            self.rows.insert(at, v);
            true
        }

        pub fn from_rows<I: IntoIterator<Item = Vec<A::E>>>(ar: &A, cols: usize, rows: I) -> Self {
            let mut e = Echelon::new(cols);
            for r in rows {
                e.insert(ar, r);
            }
            e
        }

        /// Coordinates of the residue class of `v` on the non-pivot columns.
        pub fn quotient_coords(&self, ar: &A, v: &[A::E]) -> Vec<A::E> {
            let mut w = v.to_vec();
            self.reduce(ar, &mut w);
            self.free_columns().into_iter().map(|j| w[j].clone()).collect()
        }

        pub fn free_columns(&self) -> Vec<usize> {
            let mut free = Vec::with_capacity(self.cols - self.rows.len());
            let mut k = 0;
            for j in 0..self.cols {
                if k < self.pivots.len() && self.pivots[k] == j {
                    k += 1;
                } else {
                    free.push(j);
                }
            }
            free
        }

        /// Basis of the solutions `x` of `R x = 0` where `R` is this echelon form.
        pub fn null_space(&self, ar: &A) -> Vec<Vec<A::E>> {
            self.free_columns()
                .into_iter()
                .map(|f| {
                    let mut x = vec![ar.zero(); self.cols];
                    x[f] = ar.one();
                    for (row, &p) in self.rows.iter().zip(&self.pivots) {
                        x[p] = ar.neg(&row[f]);
                    }
                    x
                })
                .collect()
        }

        pub fn intersect(&self, ar: &A, other: &Echelon<A>) -> Echelon<A> {
            // Zassenhaus: rows [u | u] and [w | 0]; rows with vanishing left half span U ∩ W.
            let n = self.cols;
            let mut big = Echelon::new(2 * n);
            for u in &self.rows {
                let mut r = u.clone();
                r.extend(u.iter().cloned());
                big.insert(ar, r);
            }
            for w in &other.rows {
                let mut r = w.clone();
                r.extend(std::iter::repeat(ar.zero()).take(n));
                big.insert(ar, r);
            }
            let rows = big.rows.iter().zip(&big.pivots).filter(|(_, &p)| p >= n).map(|(r, _)| r[n..].to_vec());
            Echelon::from_rows(ar, n, rows)
        }
    }
}

use kernels::Echelon;

/// A dense coordinate vector over a fixed field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector(pub(crate) VecData);

impl Vector {
    pub fn zero(field: Field, n: usize) -> Vector {
        Vector(with_field!(field, ar => vec![ar.zero(); n]))
    }

    pub fn basis(field: Field, n: usize, i: usize) -> Vector {
        Vector(with_field!(field, ar => {
            let mut v = vec![ar.zero(); n];
            v[i] = ar.one();
            v
        }))
    }

    pub fn from_i64(field: Field, xs: &[i64]) -> Vector {
        Vector(with_field!(field, ar => xs.iter().map(|&x| ar.from_i64(x)).collect()))
    }

    pub fn from_scalars(field: Field, xs: &[FieldScalar]) -> Result<Vector> {
        Ok(Vector(match field {
            Field::Prime(p) => {
                let ar = crate::field::ModArith::new(p);
                Dual::Mod(ar, xs.iter().map(|x| ar.from_scalar(x)).collect::<Result<_>>()?)
            }
            Field::Rational => {
                let ar = crate::field::RatArith;
                Dual::Rat(ar, xs.iter().map(|x| ar.from_scalar(x)).collect::<Result<_>>()?)
            }
        }))
    }

    pub fn random<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Vector {
        Vector(with_field!(field, ar => (0..n).map(|_| ar.random(rng)).collect()))
    }

    pub fn field(&self) -> Field {
        self.0.field()
    }

    pub fn len(&self) -> usize {
        dual!(&self.0, _ar, x => x.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> FieldScalar {
        dual!(&self.0, ar, x => ar.to_scalar(&x[i]))
    }

    pub fn set(&mut self, i: usize, s: &FieldScalar) -> Result<()> {
        dual!(&mut self.0, ar, x => { x[i] = ar.from_scalar(s)?; Ok(()) })
    }

    pub fn to_scalars(&self) -> Vec<FieldScalar> {
        dual!(&self.0, ar, x => x.iter().map(|e| ar.to_scalar(e)).collect())
    }

    /// Residues when over a prime field.
    pub fn residues(&self) -> Option<&[u32]> {
        match &self.0 {
            Dual::Mod(_, x) => Some(x),
            Dual::Rat(..) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        dual!(&self.0, ar, x => kernels::is_zero(ar, x))
    }

    pub fn support(&self) -> Vec<usize> {
        dual!(&self.0, ar, x => x.iter().enumerate().filter(|(_, e)| !ar.is_zero(e)).map(|(i, _)| i).collect())
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        dual!(&self.0, ar, x => kernels::first_nonzero(ar, x))
    }

    fn check_len(&self, other: &Vector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check_len(other)?;
        dual2_map!(&self.0, &other.0, ar, x, y => x.iter().zip(y).map(|(a, b)| ar.add(a, b)).collect()).map(Vector)
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check_len(other)?;
        dual2_map!(&self.0, &other.0, ar, x, y => x.iter().zip(y).map(|(a, b)| ar.sub(a, b)).collect()).map(Vector)
    }

    pub fn neg(&self) -> Vector {
        Vector(dual_map!(&self.0, ar, x => x.iter().map(|a| ar.neg(a)).collect()))
    }

    pub fn scale(&self, s: &FieldScalar) -> Result<Vector> {
        Ok(Vector(match &self.0 {
            Dual::Mod(ar, x) => {
                let c = ar.from_scalar(s)?;
                Dual::Mod(*ar, x.iter().map(|a| ar.mul(a, &c)).collect())
            }
            Dual::Rat(ar, x) => {
                let c = ar.from_scalar(s)?;
                Dual::Rat(*ar, x.iter().map(|a| ar.mul(a, &c)).collect())
            }
        }))
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: &FieldScalar, other: &Vector) -> Result<Vector> {
        self.add(&other.scale(s)?)
    }

    pub fn dot(&self, other: &Vector) -> Result<FieldScalar> {
        self.check_len(other)?;
        dual2!(&self.0, &other.0, ar, x, y => {
            let mut acc = ar.zero();
            for (a, b) in x.iter().zip(y) {
                ar.mul_add(&mut acc, a, b);
            }
            ar.to_scalar(&acc)
        })
    }

    /// Projective representative: first nonzero coordinate equal to one.
    pub fn normalized(&self) -> Vector {
        Vector(dual_map!(&self.0, ar, x => {
            let mut v = x.clone();
            kernels::normalize(ar, &mut v);
            v
        }))
    }

    /// `Some(λ)` with `self = λ other` (other nonzero).
    pub fn ratio_to(&self, other: &Vector) -> Option<FieldScalar> {
        if self.len() != other.len() {
            return None;
        }
        dual2!(&self.0, &other.0, ar, x, y => kernels::ratio(ar, x, y).map(|r| ar.to_scalar(&r))).ok().flatten()
    }

    pub fn is_proportional(&self, other: &Vector) -> bool {
        !self.is_zero() && !other.is_zero() && self.ratio_to(other).is_some()
    }

    /// Human-readable coordinates for export.
    pub fn to_strings(&self) -> Vec<String> {
        self.to_scalars().iter().map(|s| s.to_string()).collect()
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    pub(crate) data: VecData,
}

impl ExactMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> ExactMatrix {
        ExactMatrix { rows, cols, data: with_field!(field, ar => vec![ar.zero(); rows * cols]) }
    }

    pub fn identity(field: Field, n: usize) -> ExactMatrix {
        let data = with_field!(field, ar => {
            let mut d = vec![ar.zero(); n * n];
            for i in 0..n {
                d[i * n + i] = ar.one();
            }
            d
        });
        ExactMatrix { rows: n, cols: n, data }
    }

    pub fn from_i64(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Result<ExactMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        Ok(ExactMatrix { rows, cols, data: with_field!(field, ar => entries.iter().map(|&e| ar.from_i64(e)).collect()) })
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vector]) -> Result<ExactMatrix> {
        let mut m = ExactMatrix::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            m.set_row(i, r)?;
        }
        Ok(m)
    }

    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Result<ExactMatrix> {
        Ok(ExactMatrix::from_rows(field, rows, columns)?.transpose())
    }

    pub(crate) fn from_data(rows: usize, cols: usize, data: VecData) -> ExactMatrix {
        ExactMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.data.field()
    }

    pub fn get(&self, i: usize, j: usize) -> FieldScalar {
        dual!(&self.data, ar, d => ar.to_scalar(&d[i * self.cols + j]))
    }

    pub fn set(&mut self, i: usize, j: usize, s: &FieldScalar) -> Result<()> {
        let cols = self.cols;
        dual!(&mut self.data, ar, d => { d[i * cols + j] = ar.from_scalar(s)?; Ok(()) })
    }

    pub fn row(&self, i: usize) -> Vector {
        let c = self.cols;
        Vector(dual_map!(&self.data, _ar, d => d[i * c..(i + 1) * c].to_vec()))
    }

    pub fn set_row(&mut self, i: usize, v: &Vector) -> Result<()> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let c = self.cols;
        dual2!(&mut self.data, &v.0, _ar, d, x => d[i * c..(i + 1) * c].clone_from_slice(x))
    }

    pub fn column(&self, j: usize) -> Vector {
        let (r, c) = (self.rows, self.cols);
        Vector(dual_map!(&self.data, _ar, d => (0..r).map(|i| d[i * c + j].clone()).collect()))
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let (r, c) = (self.rows, self.cols);
        let data = dual_map!(&self.data, _ar, d => {
            let mut t = Vec::with_capacity(r * c);
            for j in 0..c {
                for i in 0..r {
                    t.push(d[i * c + j].clone());
                }
            }
            t
        });
        ExactMatrix { rows: c, cols: r, data }
    }

    pub fn is_zero(&self) -> bool {
        dual!(&self.data, ar, d => kernels::is_zero(ar, d))
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let (r, k, c) = (self.rows, self.cols, other.cols);
        let data = dual2_map!(&self.data, &other.data, ar, a, b => kernels::matmul(ar, a, b, r, k, c))?;
        Ok(ExactMatrix { rows: r, cols: c, data })
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let (r, c) = (self.rows, self.cols);
        dual2_map!(&self.data, &v.0, ar, a, x => kernels::matvec(ar, a, x, r, c)).map(Vector)
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.zip_with(other, false)
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.zip_with(other, true)
    }

    fn zip_with(&self, other: &ExactMatrix, subtract: bool) -> Result<ExactMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        let data = dual2_map!(&self.data, &other.data, ar, a, b => a
            .iter()
            .zip(b)
            .map(|(x, y)| if subtract { ar.sub(x, y) } else { ar.add(x, y) })
            .collect())?;
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &FieldScalar) -> Result<ExactMatrix> {
        let data = match &self.data {
            Dual::Mod(ar, d) => {
                let c = ar.from_scalar(s)?;
                Dual::Mod(*ar, d.iter().map(|x| ar.mul(x, &c)).collect())
            }
            Dual::Rat(ar, d) => {
                let c = ar.from_scalar(s)?;
                Dual::Rat(*ar, d.iter().map(|x| ar.mul(x, &c)).collect())
            }
        };
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn pow(&self, k: u32) -> Result<ExactMatrix> {
        let mut out = ExactMatrix::identity(self.field(), self.rows);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    fn row_echelon(&self) -> Dual<Echelon<crate::field::ModArith>, Echelon<crate::field::RatArith>> {
        let (r, c) = (self.rows, self.cols);
        dual_map!(&self.data, ar, d => Echelon::from_rows(ar, c, (0..r).map(|i| d[i * c..(i + 1) * c].to_vec())))
    }

    pub fn rank(&self) -> usize {
        dual!(&self.row_echelon(), _ar, e => e.dim())
    }

    /// Reduced row-echelon form (nonzero rows only) and its pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let e = self.row_echelon();
        let c = self.cols;
        let pivots = dual!(&e, _ar, e => e.pivots.clone());
        let data = dual_map!(&e, _ar, e => e.rows.concat());
        (ExactMatrix { rows: pivots.len(), cols: c, data }, pivots)
    }

    pub fn kernel(&self) -> Subspace {
        let c = self.cols;
        let data = dual_map!(&self.row_echelon(), ar, e => Echelon::from_rows(ar, c, e.null_space(ar)));
        Subspace { ambient: c, data }
    }

    /// Column space.
    pub fn image(&self) -> Subspace {
        self.transpose().row_space()
    }

    pub fn row_space(&self) -> Subspace {
        Subspace { ambient: self.cols, data: self.row_echelon() }
    }

    /// A solution of `M x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &Vector) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let (r, c) = (self.rows, self.cols);
        dual2!(&self.data, &b.0, ar, d, bv => {
            let aug = (0..r).map(|i| {
                let mut row = d[i * c..(i + 1) * c].to_vec();
                row.push(bv[i].clone());
                row
            });
            let e = Echelon::from_rows(ar, c + 1, aug);
            if e.pivots.last() == Some(&c) {
                None
            } else {
                let mut x = vec![ar.zero(); c];
                for (row, &p) in e.rows.iter().zip(&e.pivots) {
                    x[p] = row[c].clone();
                }
                Some(Vector(ar.wrap_vec(x)))
            }
        })
    }
}

pub(crate) type EchelonData = Dual<Echelon<crate::field::ModArith>, Echelon<crate::field::RatArith>>;

/// A linear subspace of `k^n`, stored by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    pub(crate) data: EchelonData,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { ambient, data: with_field!(field, _ar => Echelon::new(ambient)) }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace::span(field, ambient, &(0..ambient).map(|i| Vector::basis(field, ambient, i)).collect::<Vec<_>>())
            .expect("basis vectors")
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vector]) -> Result<Subspace> {
        let mut s = Subspace::zero(field, ambient);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub(crate) fn from_data(ambient: usize, data: EchelonData) -> Subspace {
        Subspace { ambient, data }
    }

    pub fn field(&self) -> Field {
        self.data.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        dual!(&self.data, _ar, e => e.dim())
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn pivots(&self) -> Vec<usize> {
        dual!(&self.data, _ar, e => e.pivots.clone())
    }

    pub fn basis(&self) -> Vec<Vector> {
        match &self.data {
            Dual::Mod(ar, e) => e.rows.iter().map(|r| Vector(Dual::Mod(*ar, r.clone()))).collect(),
            Dual::Rat(ar, e) => e.rows.iter().map(|r| Vector(Dual::Rat(*ar, r.clone()))).collect(),
        }
    }

    pub fn basis_matrix(&self) -> ExactMatrix {
        let data = dual_map!(&self.data, _ar, e => e.rows.concat());
        ExactMatrix { rows: self.dim(), cols: self.ambient, data }
    }

    fn check(&self, v: &Vector) -> Result<()> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: v.len() });
        }
        Ok(())
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        self.check(v)?;
        dual2!(&self.data, &v.0, ar, e, x => e.contains(ar, x))
    }

    /// Add a vector; returns whether the dimension grew.
    pub fn insert(&mut self, v: &Vector) -> Result<bool> {
        self.check(v)?;
        dual2!(&mut self.data, &v.0, ar, e, x => e.insert(ar, x.clone()))
    }

    /// Canonical representative of `v` modulo this subspace.
    pub fn reduce(&self, v: &Vector) -> Result<Vector> {
        self.check(v)?;
        dual2_map!(&self.data, &v.0, ar, e, x => {
            let mut w = x.clone();
            e.reduce(ar, &mut w);
            w
        })
        .map(Vector)
    }

    /// Coordinates in the quotient `k^n / self`, indexed by the non-pivot columns.
    pub fn quotient_coordinates(&self, v: &Vector) -> Result<Vector> {
        self.check(v)?;
        dual2_map!(&self.data, &v.0, ar, e, x => e.quotient_coords(ar, x)).map(Vector)
    }

    pub fn free_columns(&self) -> Vec<usize> {
        dual!(&self.data, _ar, e => e.free_columns())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        let mut s = self.clone();
        for v in other.basis() {
            s.insert(&v)?;
        }
        Ok(s)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        let data = dual2_map!(&self.data, &other.data, ar, a, b => a.intersect(ar, b))?;
        Ok(Subspace { ambient: self.ambient, data })
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        for v in self.basis() {
            if !other.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(ExactMatrix::zeros(gf(5), 4, 6).rank(), 0);
        assert_eq!(ExactMatrix::identity(gf(5), 7).rank(), 7);
        assert_eq!(ExactMatrix::identity(Field::Rational, 3).rank(), 3);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        assert!(ExactMatrix::identity(gf(3), 5).kernel().is_zero());
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = Vector::from_i64(gf(7), &[1, 2, 3, 4]);
        let x = ExactMatrix::identity(gf(7), 4).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn inconsistent_system_has_no_solution() {
        let m = ExactMatrix::from_i64(gf(5), 2, 2, &[1, 1, 2, 2]).unwrap();
        assert_eq!(m.solve(&Vector::from_i64(gf(5), &[1, 0])).unwrap(), None);
    }

    #[test]
    fn rational_kernel_and_solve() {
        let m = ExactMatrix::from_i64(Field::Rational, 2, 3, &[1, 2, 3, 2, 4, 7]).unwrap();
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        let v = &k.basis()[0];
        assert!(m.mul_vec(v).unwrap().is_zero());
        let b = Vector::from_i64(Field::Rational, &[1, 3]);
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), b);
    }

    #[test]
    fn intersection_and_sum_dimensions() {
        let f = gf(5);
        let u = Subspace::span(f, 4, &[Vector::from_i64(f, &[1, 0, 0, 0]), Vector::from_i64(f, &[0, 1, 0, 0])]).unwrap();
        let w = Subspace::span(f, 4, &[Vector::from_i64(f, &[0, 1, 0, 0]), Vector::from_i64(f, &[0, 0, 1, 1])]).unwrap();
        assert_eq!(u.sum(&w).unwrap().dim(), 3);
        let i = u.intersect(&w).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&Vector::from_i64(f, &[0, 3, 0, 0])).unwrap());
    }

    #[test]
    fn mixing_fields_fails() {
        let a = Vector::from_i64(gf(3), &[1, 2]);
        let b = Vector::from_i64(gf(5), &[1, 2]);
        assert!(matches!(a.add(&b), Err(Error::CharacteristicMismatch { .. })));
    }

    #[test]
    fn rank_nullity_random_gf5() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let r = rng.gen_range(1..9);
            let c = rng.gen_range(1..9);
            let entries: Vec<i64> = (0..r * c).map(|_| if rng.gen_bool(0.4) { rng.gen_range(0..5) } else { 0 }).collect();
            let m = ExactMatrix::from_i64(gf(5), r, c, &entries).unwrap();
            let k = m.kernel();
            assert_eq!(m.rank() + k.dim(), c);
            for v in k.basis() {
                assert!(m.mul_vec(&v).unwrap().is_zero());
            }
            assert_eq!(m.rank(), m.transpose().rank());
            let img = m.image();
            let x = Vector::random(gf(5), c, &mut rng);
            assert!(img.contains(&m.mul_vec(&x).unwrap()).unwrap());
            let (e, _) = m.rref();
            assert_eq!(e.rref().0, e);
        }
    }
}
