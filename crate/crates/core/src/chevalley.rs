//! Chevalley bases: integral structure constants for split simple Lie algebras.

use std::collections::HashMap;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::lie::{AlgebraBuilder, Element, JacobiCheck, LieAlgebra};
use crate::linalg::Vector;
use crate::roots::{Family, RootSystem};

/// Structure constants `N_{α,β}` of a Chevalley basis, indexed by positions in `RootSystem::roots()`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    n: HashMap<(usize, usize), i64>,
}

impl StructureConstants {
    /// Signs fixed by `N = +(r+1)` on extraspecial pairs, the rest by the Jacobi identity.
    pub fn compute(rs: &RootSystem) -> StructureConstants {
        let roots = rs.roots();
        let np = rs.positive_roots().len();
        let mut table: HashMap<(usize, usize), i64> = HashMap::new();
        let idx = |r: &[i64]| rs.root_index(r);
        let neg = |r: &[i64]| r.iter().map(|c| -c).collect::<Vec<i64>>();
        let add = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<i64>>();

        for xi in 0..np {
            let xi_root = &roots[xi];
            if RootSystem::height(xi_root) < 2 {
                continue;
            }
            // special pairs (α, β) with α ≺ β and α + β = ξ, in order of α
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for a in 0..np {
                let diff: Vec<i64> = xi_root.iter().zip(&roots[a]).map(|(x, y)| x - y).collect();
                if let Some(b) = idx(&diff) {
                    if b < np && a < b {
                        pairs.push((a, b));
                    }
                }
            }
            let (ea, eb) = pairs[0];
            let r = string_below(rs, &roots[ea], &roots[eb]);
            let n_extra = r + 1;
            table.insert((ea, eb), n_extra);
            table.insert((eb, ea), -n_extra);
            let xi_norm = rs.norm2(xi_root);
            for &(a, b) in &pairs[1..] {
                let alpha = &roots[a];
                let beta = &roots[b];
                let alpha1 = &roots[ea];
                let beta1 = &roots[eb];
                let mut sum = Ratio::from_integer(0i64);
                // N_{β,-α'} N_{α,-β'} / (β-α', β-α')
                let d1 = add(beta, &neg(alpha1));
                if rs.is_root(&d1) {
                    let t = n_any(rs, &table, beta, &neg(alpha1)) * n_any(rs, &table, alpha, &neg(beta1));
                    sum += Ratio::new(t, rs.norm2(&d1));
                }
                // N_{-α',α} N_{β,-β'} / (α-α', α-α')
                let d2 = add(alpha, &neg(alpha1));
                if rs.is_root(&d2) {
                    let t = n_any(rs, &table, &neg(alpha1), alpha) * n_any(rs, &table, beta, &neg(beta1));
                    sum += Ratio::new(t, rs.norm2(&d2));
                }
                let value = sum * Ratio::new(xi_norm, n_extra);
                assert!(value.is_integer(), "non-integral structure constant");
                let value = value.to_integer();
                table.insert((a, b), value);
                table.insert((b, a), -value);
            }
        }

        let mut n = HashMap::new();
        for (i, a) in roots.iter().enumerate() {
            for (j, b) in roots.iter().enumerate() {
                if rs.is_root(&add(a, b)) {
                    n.insert((i, j), n_any(rs, &table, a, b));
                }
            }
        }
        StructureConstants { n }
    }

    /// `N_{α,β}` for root positions, when `α + β` is a root.
    pub fn get(&self, a: usize, b: usize) -> Option<i64> {
        self.n.get(&(a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }
}

/// Largest `r` with `β − rα` a root.
pub fn string_below(rs: &RootSystem, alpha: &[i64], beta: &[i64]) -> i64 {
    let mut r = 0;
    let mut cur = beta.to_vec();
    loop {
        for (c, a) in cur.iter_mut().zip(alpha) {
            *c -= a;
        }
        if rs.is_root(&cur) {
            r += 1;
        } else {
            return r;
        }
    }
}

/// `N_{a,b}` for arbitrary roots with `a + b` a root, from the positive-pair table.
fn n_any(rs: &RootSystem, table: &HashMap<(usize, usize), i64>, a: &[i64], b: &[i64]) -> i64 {
    let pa = RootSystem::is_positive(a);
    let pb = RootSystem::is_positive(b);
    if pa && pb {
        let ia = rs.root_index(a).expect("root");
        let ib = rs.root_index(b).expect("root");
        return *table.get(&(ia, ib)).expect("positive pair computed earlier");
    }
    let na: Vec<i64> = a.iter().map(|c| -c).collect();
    let nb: Vec<i64> = b.iter().map(|c| -c).collect();
    if !pa && !pb {
        return -n_any(rs, table, &na, &nb);
    }
    // a + b + c = 0: N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b)
    let c: Vec<i64> = a.iter().zip(b).map(|(x, y)| -x - y).collect();
    let pc = RootSystem::is_positive(&c);
    let value = if pb == pc {
        Ratio::new(rs.norm2(&c), rs.norm2(a)) * n_any(rs, table, b, &c)
    } else {
        Ratio::new(rs.norm2(&c), rs.norm2(b)) * n_any(rs, table, &c, a)
    };
    assert!(value.is_integer(), "non-integral structure constant");
    value.to_integer()
}

/// A split simple Lie algebra in its Chevalley basis.
///
/// Basis order: `X_α` for positive roots (ascending height), `H_1..H_r`, then `X_{−α}`
/// in the same order as the positive roots.
#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    algebra: LieAlgebra,
    roots: RootSystem,
    constants: StructureConstants,
}

impl ChevalleyAlgebra {
    pub fn new(rs: &RootSystem, field: Field) -> Result<ChevalleyAlgebra> {
        ChevalleyAlgebra::with_check(rs, field, None)
    }

    pub fn from_label(label: &str, field: Field) -> Result<ChevalleyAlgebra> {
        ChevalleyAlgebra::new(&RootSystem::from_label(label)?, field)
    }

    pub fn with_check(rs: &RootSystem, field: Field, check: Option<JacobiCheck>) -> Result<ChevalleyAlgebra> {
        let constants = StructureConstants::compute(rs);
        let roots = rs.roots();
        let np = rs.positive_roots().len();
        let r = rs.rank();
        let dim = 2 * np + r;
        let pos_of = |i: usize| if i < np { i } else { i + r };
        let mut names: Vec<String> = Vec::with_capacity(dim);
        for root in rs.positive_roots() {
            names.push(root_name(root));
        }
        for i in 0..r {
            names.push(format!("H{}", i + 1));
        }
        for root in rs.positive_roots() {
            names.push(root_name(&root.iter().map(|c| -c).collect::<Vec<_>>()));
        }
        let label = format!("{} Chevalley over {}", rs.cartan_type(), field);
        let mut b = AlgebraBuilder::new(field, dim, label.clone()).names(names);

        for (i, a) in roots.iter().enumerate() {
            for (j, c) in roots.iter().enumerate() {
                let sum: Vec<i64> = a.iter().zip(c).map(|(x, y)| x + y).collect();
                if let Some(k) = rs.root_index(&sum) {
                    let n = constants.get(i, j).expect("constant for root pair");
                    b.add_i64(pos_of(i), pos_of(j), pos_of(k), n)?;
                } else if sum.iter().all(|&s| s == 0) && i < j {
                    // [X_α, X_{−α}] = H_α with coroot coefficients k_i (α_i,α_i)/(α,α)
                    let norm = rs.norm2(a);
                    for (t, &k) in a.iter().enumerate() {
                        if k != 0 {
                            let coeff = k * rs.simple_root_gram()[t][t];
                            debug_assert_eq!(coeff % norm, 0);
                            b.add_i64(pos_of(i), pos_of(j), np + t, coeff / norm)?;
                        }
                    }
                }
            }
            for t in 0..r {
                let w = rs.pairing(a, t);
                if w != 0 {
                    b.add_i64(np + t, pos_of(i), pos_of(i), w)?;
                }
            }
        }

        let generators: Vec<Vector> = roots
            .iter()
            .enumerate()
            .filter(|(_, a)| rs.is_long(a))
            .map(|(i, _)| Vector::basis(field, dim, pos_of(i)))
            .collect();
        b = b.simple(chevalley_is_simple(rs, field)).extremal_generators(generators);
        if let Some(check) = check {
            b = b.jacobi_check(check);
        }
        let algebra = b.build()?;
        Ok(ChevalleyAlgebra { algebra, roots: rs.clone(), constants })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.roots
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.constants
    }

    fn num_positive(&self) -> usize {
        self.roots.positive_roots().len()
    }

    /// Basis position of `X_α`.
    pub fn root_position(&self, root: &[i64]) -> Result<usize> {
        let i = self
            .roots
            .root_index(root)
            .ok_or_else(|| Error::Parse(format!("{root:?} is not a root of {}", self.roots.cartan_type())))?;
        let np = self.num_positive();
        Ok(if i < np { i } else { i + self.roots.rank() })
    }

    pub fn root_vector(&self, root: &[i64]) -> Result<Element> {
        Ok(self.algebra.basis_element(self.root_position(root)?))
    }

    /// `X_{α_i}` for `i` counted from one.
    pub fn simple_root_vector(&self, i: usize) -> Result<Element> {
        let r = self.roots.rank();
        if i == 0 || i > r {
            return Err(Error::Parse(format!("simple root index {i} out of range 1..={r}")));
        }
        let mut root = vec![0; r];
        root[i - 1] = 1;
        self.root_vector(&root)
    }

    /// `Σ X_{α_i}` over the given one-based simple-root indices.
    pub fn simple_root_sum(&self, indices: &[usize]) -> Result<Element> {
        let mut x = self.algebra.zero();
        for &i in indices {
            x = x.add(&self.simple_root_vector(i)?)?;
        }
        Ok(x)
    }

    /// `H_i` for `i` counted from one.
    pub fn cartan_element(&self, i: usize) -> Result<Element> {
        let r = self.roots.rank();
        if i == 0 || i > r {
            return Err(Error::Parse(format!("Cartan index {i} out of range 1..={r}")));
        }
        Ok(self.algebra.basis_element(self.num_positive() + i - 1))
    }

    /// The root of a basis position, or `None` for Cartan positions.
    pub fn root_of_position(&self, pos: usize) -> Option<Vec<i64>> {
        let np = self.num_positive();
        let r = self.roots.rank();
        if pos < np {
            Some(self.roots.positive_roots()[pos].clone())
        } else if pos >= np + r {
            Some(self.roots.positive_roots()[pos - np - r].iter().map(|c| -c).collect())
        } else {
            None
        }
    }
}

/// Whether the Chevalley algebra is simple (it is then generated by long root elements).
pub fn chevalley_is_simple(rs: &RootSystem, field: Field) -> bool {
    let p = field.characteristic();
    if p == 0 {
        return true;
    }
    let t = rs.cartan_type();
    match t.family {
        Family::A => (t.rank as u32 + 1) % p != 0,
        Family::E => !(t.rank == 6 && p == 3),
        Family::G => p != 3,
        _ => true,
    }
}

fn root_name(root: &[i64]) -> String {
    let nonzero: Vec<(usize, i64)> = root.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
    if nonzero.len() == 1 && nonzero[0].1.abs() == 1 {
        let (i, c) = nonzero[0];
        return format!("X{}a{}", if c < 0 { "-" } else { "" }, i + 1);
    }
    let coeffs: Vec<String> = root.iter().map(|c| c.to_string()).collect();
    format!("X[{}]", coeffs.join(","))
}
