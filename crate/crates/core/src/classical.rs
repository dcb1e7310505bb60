//! Classical Lie algebras realized by matrices: sl(V) and the skew algebras
//! sl(V)_B of a non-degenerate alternating or symmetric form, with the
//! D-operators that span them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldScalar};
use crate::lie::{AlgebraBuilder, Element, JacobiCheck, LieAlgebra};
use crate::linalg::{ExactMatrix, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FormKind {
    Alternating,
    Symmetric,
}

/// A vector space with a non-degenerate bilinear form given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearSpace {
    kind: FormKind,
    gram: ExactMatrix,
}

impl BilinearSpace {
    pub fn new(kind: FormKind, gram: ExactMatrix) -> Result<BilinearSpace> {
        if gram.rows() != gram.cols() {
            return Err(Error::DimensionMismatch { expected: gram.rows(), found: gram.cols() });
        }
        let t = gram.transpose();
        let ok = match kind {
            FormKind::Symmetric => t == gram,
            FormKind::Alternating => {
                let n = gram.rows();
                t == gram.scale(&FieldScalar::from_i64(gram.field(), -1))? && (0..n).all(|i| gram.get(i, i).is_zero())
            }
        };
        if !ok {
            return Err(Error::Precondition(format!("Gram matrix is not {kind:?}")));
        }
        if gram.rank() < gram.rows() {
            return Err(Error::DegenerateForm);
        }
        Ok(BilinearSpace { kind, gram })
    }

    /// Block antidiagonal ±1 for alternating forms, antidiagonal ones for symmetric forms.
    pub fn standard(kind: FormKind, dim: usize, field: Field) -> Result<BilinearSpace> {
        if field.characteristic() == 2 {
            return Err(Error::UnsupportedCharacteristic(2));
        }
        let mut entries = vec![0i64; dim * dim];
        match kind {
            FormKind::Alternating => {
                if dim % 2 != 0 || dim == 0 {
                    return Err(Error::DegenerateForm);
                }
                let m = dim / 2;
                for i in 0..dim {
                    entries[i * dim + (dim - 1 - i)] = if i < m { 1 } else { -1 };
                }
            }
            FormKind::Symmetric => {
                for i in 0..dim {
                    entries[i * dim + (dim - 1 - i)] = 1;
                }
            }
        }
        BilinearSpace::new(kind, ExactMatrix::from_i64(field, dim, dim, &entries)?)
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn field(&self) -> Field {
        self.gram.field()
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    /// `B(a, b) = aᵀ G b`.
    pub fn form(&self, a: &Vector, b: &Vector) -> Result<FieldScalar> {
        a.dot(&self.gram.mul_vec(b)?)
    }

    /// Whether `B` vanishes identically on the span of the given vectors.
    pub fn is_totally_singular(&self, vs: &[Vector]) -> Result<bool> {
        for (i, a) in vs.iter().enumerate() {
            for b in &vs[i..] {
                if !self.form(a, b)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MatrixKind {
    Special,
    Symplectic,
    Orthogonal,
}

/// A Lie algebra of `n × n` matrices with converters to structure-constant coordinates.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    algebra: LieAlgebra,
    kind: MatrixKind,
    n: usize,
    basis: Vec<ExactMatrix>,
    /// Rows `[vec(b_i) | e_i]` in echelon form; reducing `[vec(M) | 0]` exposes the coordinates.
    coords: Subspace,
    space: Option<BilinearSpace>,
}

fn flatten(m: &ExactMatrix) -> Vector {
    let n = m.cols();
    let mut out = Vec::with_capacity(m.rows() * n);
    for i in 0..m.rows() {
        out.extend(m.row(i).to_scalars());
    }
    Vector::from_scalars(m.field(), &out).expect("same field")
}

fn unit(field: Field, n: usize, i: usize, j: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(field, n, n);
    m.set(i, j, &field.one()).expect("same field");
    m
}

/// The matrix `a cᵀ`.
fn outer(a: &Vector, c: &Vector) -> ExactMatrix {
    let n = a.len();
    let rows: Vec<Vector> = a.to_scalars().iter().map(|ai| c.scale(ai).expect("same field")).collect();
    ExactMatrix::from_rows(a.field(), n, &rows).expect("square")
}

impl MatrixAlgebra {
    fn assemble(
        field: Field,
        kind: MatrixKind,
        n: usize,
        basis: Vec<ExactMatrix>,
        names: Vec<String>,
        space: Option<BilinearSpace>,
        label: String,
        simple: bool,
        generators: Vec<ExactMatrix>,
    ) -> Result<MatrixAlgebra> {
        let d = basis.len();
        let ambient = n * n + d;
        let mut coords = Subspace::zero(field, ambient);
        for (i, b) in basis.iter().enumerate() {
            let mut row = flatten(b).to_scalars();
            let mut tail = vec![field.zero(); d];
            tail[i] = field.one();
            row.extend(tail);
            if !coords.insert(&Vector::from_scalars(field, &row)?)? {
                return Err(Error::Precondition("basis matrices are dependent".into()));
            }
        }
        let mut proto = MatrixAlgebra {
            algebra: AlgebraBuilder::new(field, 0, "").build()?,
            kind,
            n,
            basis,
            coords,
            space,
        };
        let mut b = AlgebraBuilder::new(field, d, label).names(names).simple(simple).jacobi_check(JacobiCheck::Skip);
        for i in 0..d {
            for j in i + 1..d {
                let c = proto.basis[i].mul(&proto.basis[j])?.sub(&proto.basis[j].mul(&proto.basis[i])?)?;
                let v = proto.coords_of(&c)?;
                for (k, s) in v.to_scalars().into_iter().enumerate() {
                    if !s.is_zero() {
                        b.add(i, j, k, s)?;
                    }
                }
            }
        }
        let gens = generators.iter().map(|g| proto.coords_of(g)).collect::<Result<Vec<_>>>()?;
        let algebra = b.extremal_generators(gens).jacobi_check(JacobiCheck::default_for(d)).build()?;
        proto.algebra = algebra;
        Ok(proto)
    }

    /// `sl_n` with basis `E_ij` (i ≠ j, row-major) followed by `H_i = E_ii − E_{i+1,i+1}`.
    pub fn sl(n: usize, field: Field) -> Result<MatrixAlgebra> {
        if n < 2 {
            return Err(Error::Precondition("sl_n needs n ≥ 2".into()));
        }
        let mut basis = Vec::new();
        let mut names = Vec::new();
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    basis.push(unit(field, n, i, j));
                    names.push(unit_name(i, j, n));
                    gens.push(unit(field, n, i, j));
                }
            }
        }
        for i in 0..n - 1 {
            basis.push(unit(field, n, i, i).sub(&unit(field, n, i + 1, i + 1))?);
            names.push(format!("H{}", i + 1));
        }
        let p = field.characteristic();
        let simple = p == 0 || n as u32 % p != 0;
        MatrixAlgebra::assemble(field, MatrixKind::Special, n, basis, names, None, format!("sl_{n} over {field}"), simple, gens)
    }

    /// The skew algebra `sl(V)_B` of a non-degenerate form, spanned by D-operators of basis vectors.
    pub fn skew(space: &BilinearSpace) -> Result<MatrixAlgebra> {
        let field = space.field();
        if field.characteristic() == 2 {
            return Err(Error::UnsupportedCharacteristic(2));
        }
        let n = space.dim();
        let e = |i: usize| Vector::basis(field, n, i);
        let mut basis = Vec::new();
        let mut names = Vec::new();
        let mut gens = Vec::new();
        let (kind, label, simple) = match space.kind() {
            FormKind::Alternating => {
                for i in 0..n {
                    for j in i..n {
                        if i == j {
                            basis.push(d_sympl_single_matrix(space, &e(i))?);
                            names.push(format!("D{}", i + 1));
                        } else {
                            basis.push(d_sympl_matrix(space, &e(i), &e(j))?);
                            names.push(format!("D{},{}", i + 1, j + 1));
                        }
                    }
                }
                for i in 0..n {
                    gens.push(d_sympl_single_matrix(space, &e(i))?);
                    for j in i + 1..n {
                        gens.push(d_sympl_single_matrix(space, &e(i).add(&e(j))?)?);
                    }
                }
                (MatrixKind::Symplectic, format!("sp_{n} over {field}"), true)
            }
            FormKind::Symmetric => {
                for i in 0..n {
                    for j in i + 1..n {
                        basis.push(d_orth_matrix(space, &e(i), &e(j))?);
                        names.push(format!("D{},{}", i + 1, j + 1));
                        if space.is_totally_singular(&[e(i), e(j)])? {
                            gens.push(d_orth_matrix(space, &e(i), &e(j))?);
                        }
                    }
                }
                (MatrixKind::Orthogonal, format!("so_{n} over {field}"), n >= 5)
            }
        };
        MatrixAlgebra::assemble(field, kind, n, basis, names, Some(space.clone()), label, simple, gens)
    }

    pub fn symplectic(dim: usize, field: Field) -> Result<MatrixAlgebra> {
        MatrixAlgebra::skew(&BilinearSpace::standard(FormKind::Alternating, dim, field)?)
    }

    pub fn orthogonal(dim: usize, field: Field) -> Result<MatrixAlgebra> {
        MatrixAlgebra::skew(&BilinearSpace::standard(FormKind::Symmetric, dim, field)?)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    /// Dimension of the natural module.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn space(&self) -> Option<&BilinearSpace> {
        self.space.as_ref()
    }

    pub fn basis_matrices(&self) -> &[ExactMatrix] {
        &self.basis
    }

    fn coords_of(&self, m: &ExactMatrix) -> Result<Vector> {
        let field = self.coords.field();
        let d = self.basis.len();
        let mut row = flatten(m).to_scalars();
        row.extend(vec![field.zero(); d]);
        let reduced = self.coords.reduce(&Vector::from_scalars(field, &row)?)?.to_scalars();
        let nn = self.n * self.n;
        if reduced[..nn].iter().any(|s| !s.is_zero()) {
            return Err(Error::Precondition("matrix does not lie in the algebra".into()));
        }
        Ok(Vector::from_scalars(field, &reduced[nn..])?.neg())
    }

    pub fn from_matrix(&self, m: &ExactMatrix) -> Result<Element> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: m.rows() });
        }
        self.algebra.element(self.coords_of(m)?)
    }

    pub fn to_matrix(&self, x: &Element) -> Result<ExactMatrix> {
        if x.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = ExactMatrix::zeros(self.field(), self.n, self.n);
        for (c, b) in x.coords().to_scalars().iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&b.scale(c)?)?;
            }
        }
        Ok(out)
    }

    /// `X v` on the natural module.
    pub fn act(&self, x: &Element, v: &Vector) -> Result<Vector> {
        self.to_matrix(x)?.mul_vec(v)
    }

    /// Matrix unit `E_ij` (one-based) in `sl_n`.
    pub fn matrix_unit(&self, i: usize, j: usize) -> Result<Element> {
        if self.kind != MatrixKind::Special || i == j || i == 0 || j == 0 || i > self.n || j > self.n {
            return Err(Error::Parse(format!("E{i}{j} is not a basis matrix unit here")));
        }
        self.from_matrix(&unit(self.field(), self.n, i - 1, j - 1))
    }

    fn require(&self, kind: FormKind) -> Result<&BilinearSpace> {
        match &self.space {
            Some(s) if s.kind() == kind => Ok(s),
            _ => Err(Error::Precondition(format!("needs a {kind:?} form"))),
        }
    }

    /// `D_{a,b}(v) = B(v,b)a + B(v,a)b` for an alternating form.
    pub fn d_sympl(&self, a: &Vector, b: &Vector) -> Result<Element> {
        let s = self.require(FormKind::Alternating)?;
        self.from_matrix(&d_sympl_matrix(s, a, b)?)
    }

    /// `D_a(v) = B(v,a)a`, that is `D_{a,a} / 2`.
    pub fn d_sympl_single(&self, a: &Vector) -> Result<Element> {
        let s = self.require(FormKind::Alternating)?;
        self.from_matrix(&d_sympl_single_matrix(s, a)?)
    }

    /// `D_{a,b}(x) = B(x,a)b − B(x,b)a` for a symmetric form.
    pub fn d_orth(&self, a: &Vector, b: &Vector) -> Result<Element> {
        let s = self.require(FormKind::Symmetric)?;
        self.from_matrix(&d_orth_matrix(s, a, b)?)
    }
}

fn unit_name(i: usize, j: usize, n: usize) -> String {
    if n < 10 {
        format!("E{}{}", i + 1, j + 1)
    } else {
        format!("E{},{}", i + 1, j + 1)
    }
}

fn d_sympl_matrix(s: &BilinearSpace, a: &Vector, b: &Vector) -> Result<ExactMatrix> {
    let ga = s.gram().mul_vec(a)?;
    let gb = s.gram().mul_vec(b)?;
    outer(a, &gb).add(&outer(b, &ga))
}

fn d_sympl_single_matrix(s: &BilinearSpace, a: &Vector) -> Result<ExactMatrix> {
    Ok(outer(a, &s.gram().mul_vec(a)?))
}

fn d_orth_matrix(s: &BilinearSpace, a: &Vector, b: &Vector) -> Result<ExactMatrix> {
    let ga = s.gram().mul_vec(a)?;
    let gb = s.gram().mul_vec(b)?;
    outer(b, &ga).sub(&outer(a, &gb))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(MatrixAlgebra::sl(2, gf(5)).unwrap().algebra().dim(), 3);
        assert_eq!(MatrixAlgebra::sl(4, gf(3)).unwrap().algebra().dim(), 15);
        assert_eq!(MatrixAlgebra::symplectic(4, gf(3)).unwrap().algebra().dim(), 10);
        assert_eq!(MatrixAlgebra::symplectic(6, gf(5)).unwrap().algebra().dim(), 21);
        assert_eq!(MatrixAlgebra::orthogonal(7, gf(3)).unwrap().algebra().dim(), 21);
        assert_eq!(MatrixAlgebra::orthogonal(8, gf(5)).unwrap().algebra().dim(), 28);
    }

    #[test]
    fn sl2_relation() {
        let sl2 = MatrixAlgebra::sl(2, gf(5)).unwrap();
        let e = sl2.matrix_unit(1, 2).unwrap();
        let f = sl2.matrix_unit(2, 1).unwrap();
        let h = sl2.algebra().basis_element(2);
        assert_eq!(e.bracket(&f).unwrap(), h);
    }

    #[test]
    fn converters_round_trip_and_commutator() {
        let sl3 = MatrixAlgebra::sl(3, Field::Rational).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        for _ in 0..10 {
            let x = sl3.algebra().random_element(&mut rng);
            let y = sl3.algebra().random_element(&mut rng);
            let (mx, my) = (sl3.to_matrix(&x).unwrap(), sl3.to_matrix(&y).unwrap());
            assert_eq!(sl3.from_matrix(&mx).unwrap(), x);
            let comm = mx.mul(&my).unwrap().sub(&my.mul(&mx).unwrap()).unwrap();
            assert_eq!(sl3.from_matrix(&comm).unwrap(), x.bracket(&y).unwrap());
        }
    }

    #[test]
    fn trace_nonzero_rejected() {
        let sl2 = MatrixAlgebra::sl(2, gf(5)).unwrap();
        assert!(sl2.from_matrix(&ExactMatrix::identity(gf(5), 2)).is_err());
    }

    #[test]
    fn degenerate_form_rejected() {
        let g = ExactMatrix::from_i64(gf(5), 2, 2, &[1, 1, 1, 1]).unwrap();
        assert_eq!(BilinearSpace::new(FormKind::Symmetric, g), Err(Error::DegenerateForm));
        assert!(BilinearSpace::standard(FormKind::Alternating, 3, gf(5)).is_err());
    }

    #[test]
    fn center_of_sl3() {
        assert_eq!(MatrixAlgebra::sl(3, gf(5)).unwrap().algebra().center().dim(), 0);
        assert_eq!(MatrixAlgebra::sl(3, gf(3)).unwrap().algebra().center().dim(), 1);
    }
}
