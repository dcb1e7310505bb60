use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use extremal::classical::MatrixAlgebra;
use extremal::geometry::{self, ExtremalSampler, Relation};
use extremal::inner_ideals::{self, GENERIC_TABLE};
use extremal::{AlgebraSpec, Element, ExactMatrix, ExtremalPoint, Field, FieldScalar, LieAlgebra, Model, Subspace, Vector};

fn gf(p: u32) -> Field {
    Field::prime(p).unwrap()
}

fn model(spec: &'static str, slot: &'static OnceLock<Model>) -> &'static Model {
    slot.get_or_init(|| spec.parse::<AlgebraSpec>().unwrap().build().unwrap())
}

macro_rules! algebra {
    ($name:ident, $spec:literal) => {
        fn $name() -> &'static LieAlgebra {
            static SLOT: OnceLock<Model> = OnceLock::new();
            model($spec, &SLOT).algebra()
        }
    };
}

algebra!(sl3_gf3, "sl3,gf3");
algebra!(sl4_gf3, "sl4,gf3");
algebra!(sp4_gf3, "sp4,gf3");
algebra!(so7_gf3, "so7,gf3");
algebra!(sl4_gf5, "sl4,gf5");
algebra!(so7_gf5, "so7,gf5");
algebra!(g2_gf5, "G2,gf5");
algebra!(f4_gf5, "F4,gf5");
algebra!(sl3_q, "sl3,q");

fn sampled_algebras() -> [&'static LieAlgebra; 6] {
    [sl3_gf3(), sp4_gf3(), sl4_gf5(), so7_gf5(), g2_gf5(), f4_gf5()]
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sample(l: &LieAlgebra, seed: u64) -> ExtremalPoint {
    ExtremalSampler::new(l).unwrap().sample(8, &mut rng(seed))
}

fn scalar(l: &LieAlgebra, v: i64) -> FieldScalar {
    FieldScalar::from_i64(l.field(), v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity_and_image(rows in 1usize..7, cols in 1usize..7, entries in prop::collection::vec(-4i64..5, 36), v in prop::collection::vec(-4i64..5, 6)) {
        for field in [gf(5), Field::Rational] {
            let m = ExactMatrix::from_i64(field, rows, cols, &entries[..rows * cols]).unwrap();
            prop_assert_eq!(m.rank() + m.kernel().dim(), cols);
            let x = Vector::from_i64(field, &v[..cols]);
            prop_assert!(m.image().contains(&m.mul_vec(&x).unwrap()).unwrap());
            let (r, pivots) = m.rref();
            let (rr, pivots2) = r.rref();
            prop_assert_eq!(rr, r);
            prop_assert_eq!(pivots2, pivots);
        }
    }

    #[test]
    fn jacobi_on_random_triples(seed in any::<u64>()) {
        let mut r = rng(seed);
        for l in sampled_algebras().into_iter().chain([sl3_q()]) {
            let (x, y, z) = (l.random_element(&mut r), l.random_element(&mut r), l.random_element(&mut r));
            let a = x.bracket(&y.bracket(&z).unwrap()).unwrap();
            let b = y.bracket(&z.bracket(&x).unwrap()).unwrap();
            let c = z.bracket(&x.bracket(&y).unwrap()).unwrap();
            prop_assert!(a.add(&b).unwrap().add(&c).unwrap().is_zero(), "{}", l.label());
        }
    }

    #[test]
    fn extremal_form_identity_and_linearity(seed in any::<u64>(), s in -3i64..4) {
        let mut r = rng(seed ^ 0x9e37);
        for l in sampled_algebras() {
            let x = sample(l, seed);
            let (y, z) = (l.random_element(&mut r), l.random_element(&mut r));
            let g = l.extremal_g(&x, &y).unwrap();
            let two_g = &scalar(l, 2) * &g;
            prop_assert_eq!(x.element().ad2(&y).unwrap(), x.element().scale(&two_g).unwrap());
            let combo = y.add(&z.scale_i64(s)).unwrap();
            let lhs = l.extremal_g(&x, &combo).unwrap();
            let rhs = &g + &(&scalar(l, s) * &l.extremal_g(&x, &z).unwrap());
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(l.ad_nilpotency_index(x.element(), 8).unwrap(), Some(3));
        }
    }

    #[test]
    fn pair_relations_are_symmetric_and_shaped(seed in any::<u64>()) {
        let mut r = rng(seed);
        for l in [sl4_gf3(), so7_gf3(), sp4_gf3(), g2_gf5()] {
            let sampler = ExtremalSampler::new(l).unwrap();
            let x = sampler.sample(8, &mut r);
            let y = if r.gen_bool(0.5) { sampler.perturb(&x, 1, &mut r).unwrap() } else { sampler.sample(8, &mut r) };
            let xy = geometry::classify_pair(&x, &y).unwrap();
            prop_assert_eq!(geometry::classify_pair(&y, &x).unwrap().relation, xy.relation);
            let (a, b) = (x.element(), y.element());
            let bracket = a.bracket(b).unwrap();
            match xy.relation {
                Relation::SamePoint => prop_assert!(a.is_proportional(b)),
                Relation::StronglyCommuting => {
                    let p = l.field().characteristic() as i64;
                    for t in 0..p {
                        prop_assert!(l.is_extremal(&a.add(&b.scale_i64(t)).unwrap()).unwrap());
                    }
                }
                Relation::Polar => prop_assert!(bracket.is_zero()),
                Relation::Special => prop_assert!(l.is_extremal(&bracket).unwrap()),
                Relation::Hyperbolic => {
                    let span = Subspace::span(l.field(), l.dim(), &[a.coords().clone(), b.coords().clone(), bracket.coords().clone()]).unwrap();
                    prop_assert_eq!(span.dim(), 3);
                    prop_assert!(a.bracket(&bracket).unwrap().is_proportional(a));
                    prop_assert!(b.bracket(&bracket).unwrap().is_proportional(b));
                }
            }
        }
    }

    #[test]
    fn exp_ad_preserves_brackets(seed in any::<u64>(), t in 1i64..5) {
        let mut r = rng(seed);
        for l in [sl4_gf5(), so7_gf5(), g2_gf5()] {
            let x = sample(l, seed);
            let t = scalar(l, t);
            let (u, v) = (l.random_element(&mut r), l.random_element(&mut r));
            let e = |w: &Element| geometry::exp_ad(x.element(), &t, w).unwrap();
            prop_assert_eq!(e(&u).bracket(&e(&v)).unwrap(), e(&u.bracket(&v).unwrap()));
        }
    }

    #[test]
    fn inner_closure_is_monotone_and_idempotent(seed in any::<u64>()) {
        for l in [sl4_gf3(), so7_gf3()] {
            let sampler = ExtremalSampler::new(l).unwrap();
            let mut r = rng(seed);
            let x = sampler.sample(8, &mut r);
            let y = sampler.perturb(&x, 1, &mut r).unwrap();
            let small = inner_ideals::inner_closure(&[x.element().clone()]).unwrap();
            let big = inner_ideals::inner_closure(&[x.element().clone(), y.element().clone()]).unwrap();
            prop_assert!(small.subspace().is_subspace_of(big.subspace()).unwrap());
            let again = inner_ideals::inner_closure(&big.basis()).unwrap();
            prop_assert_eq!(again.subspace(), big.subspace());
            prop_assert!(big.verify().unwrap());
            if big.is_proper() {
                let b = inner_ideals::benkart_check_exhaustive(&big).unwrap();
                prop_assert!(b.holds && b.commutative);
            }
        }
    }

    #[test]
    fn element_display_parses_back(seed in any::<u64>()) {
        static SL3: OnceLock<Model> = OnceLock::new();
        static F4: OnceLock<Model> = OnceLock::new();
        for m in [model("sl3,gf5", &SL3), model("F4,gf5", &F4)] {
            let x = m.algebra().random_element(&mut rng(seed));
            prop_assert_eq!(m.parse_element(&x.display()).unwrap(), x);
        }
    }
}

#[test]
fn pair_relation_is_symmetric_on_every_pair() {
    for l in [sl3_gf3(), sp4_gf3(), sl4_gf3()] {
        let pts = geometry::enumerate_extremal_points(l, &[], 100_000).unwrap();
        let space = geometry::build_space(&pts).unwrap();
        let n = pts.len();
        let mut counts = [0usize; 5];
        for i in 0..n {
            assert_eq!(space.relation(i, i), Relation::SamePoint);
            for j in 0..n {
                let r = space.relation(i, j);
                assert_eq!(r, space.relation(j, i));
                counts[r.code() as usize] += 1;
            }
        }
        assert_eq!(counts.iter().sum::<usize>(), n * n);
        assert_eq!(counts[0], n, "{}", l.label());
        // spot-check the stored matrix against the pairwise classifier
        for i in (0..n).step_by(7) {
            for j in (0..n).step_by(5) {
                assert_eq!(geometry::classify_pair(&pts.point(i), &pts.point(j)).unwrap().relation, space.relation(i, j));
            }
        }
    }
}

#[test]
fn symplecta_are_convex_and_commuting() {
    let l = sl4_gf3();
    let pts = geometry::enumerate_extremal_points(l, &[], 100_000).unwrap();
    let space = geometry::build_space(&pts).unwrap();
    let symps = space.symplecta().unwrap();
    assert!(!symps.is_empty());
    for s in symps.iter().take(40) {
        for &a in &s.points {
            for &b in &s.points {
                assert!(space.relation(a, b).is_commuting());
            }
        }
        let (x, y) = s.pair;
        assert_eq!(space.relation(x, y), Relation::Polar);
        for z in 0..space.len() {
            if space.collinear(x, z) && space.collinear(y, z) {
                assert!(s.points.contains(&z), "common neighbour {z} outside the symplecton");
            }
        }
    }
}

#[test]
fn ad_square_image_is_inner_exactly_for_commutative_rows() {
    for row in &GENERIC_TABLE {
        let r = inner_ideals::evaluate_row(row, 5).unwrap();
        assert_eq!(r.full.image_inner, row.flag.commutative(), "{} {}", row.algebra, row.class);
        if row.flag.commutative() {
            assert!(r.full.closure_is_image);
        }
    }
}

fn nilpotent_square_cube_zero(m: &MatrixAlgebra, x: &Element) -> Option<ExactMatrix> {
    let mx = m.to_matrix(x).unwrap();
    (!mx.pow(2).unwrap().is_zero() && mx.pow(3).unwrap().is_zero()).then_some(mx)
}

/// Hyperbolic pairs `(e_i, f_i)` with `B(e_i, f_j) = δ_ij`, plus whatever anisotropic
/// vector is left over in odd dimension.
fn hyperbolic_basis(m: &MatrixAlgebra, r: &mut ChaCha8Rng) -> (Vec<Vector>, Vec<Vector>, Option<Vector>) {
    let space = m.space().unwrap();
    let field = m.field();
    let b = |x: &Vector, y: &Vector| space.form(x, y).unwrap();
    let alternating = matches!(space.kind(), extremal::classical::FormKind::Alternating);
    let (mut es, mut fs): (Vec<Vector>, Vec<Vector>) = (Vec::new(), Vec::new());
    let project = |v: Vector, es: &[Vector], fs: &[Vector]| {
        let mut out = v.clone();
        for (e, f) in es.iter().zip(fs) {
            out = out.sub(&e.scale(&b(&v, f)).unwrap()).unwrap();
            let c = if alternating { -&b(&v, e) } else { b(&v, e) };
            out = out.sub(&f.scale(&c).unwrap()).unwrap();
        }
        out
    };
    while 2 * (es.len() + 1) <= m.n() {
        let mut pair = None;
        for _ in 0..500 {
            let e = project(Vector::random(field, m.n(), r), &es, &fs);
            let w = project(Vector::random(field, m.n(), r), &es, &fs);
            if e.is_zero() || !b(&e, &e).is_zero() || b(&e, &w).is_zero() {
                continue;
            }
            let two = FieldScalar::from_i64(field, 2);
            let c = &b(&w, &w) * &(&two * &b(&e, &w)).inv().unwrap();
            let f = w.sub(&e.scale(&c).unwrap()).unwrap();
            let f = f.scale(&b(&e, &f).inv().unwrap()).unwrap();
            pair = Some((e, f));
            break;
        }
        let (e, f) = pair.expect("split form has a hyperbolic pair");
        es.push(e);
        fs.push(f);
    }
    let rest = (2 * es.len() < m.n()).then(|| {
        (0..m.n()).map(|i| project(Vector::basis(field, m.n(), i), &es, &fs)).find(|v| !v.is_zero()).unwrap()
    });
    (es, fs, rest)
}

/// Random combinations of a few nilradical generators that square to something nonzero
/// and cube to zero.
fn sample_cube_zero(m: &MatrixAlgebra, gens: &[Element], r: &mut ChaCha8Rng, tries: usize) -> Vec<(Element, ExactMatrix)> {
    let p = m.field().characteristic() as i64;
    let mut out = Vec::new();
    for _ in 0..tries {
        let mut x = m.algebra().zero();
        for _ in 0..r.gen_range(2..=4) {
            let g = &gens[r.gen_range(0..gens.len())];
            x = x.add(&g.scale_i64(r.gen_range(1..p))).unwrap();
        }
        if let Some(mx) = nilpotent_square_cube_zero(m, &x) {
            out.push((x, mx));
        }
    }
    out
}

#[test]
fn jordan_profile_constraints() {
    let mut r = rng(41);
    let sp = MatrixAlgebra::symplectic(6, gf(5)).unwrap();
    let (es, fs, _) = hyperbolic_basis(&sp, &mut r);
    let mut gens = Vec::new();
    for i in 0..es.len() {
        gens.push(sp.d_sympl_single(&es[i]).unwrap());
        for j in i + 1..es.len() {
            gens.push(sp.d_sympl(&es[i], &es[j]).unwrap());
            gens.push(sp.d_sympl(&es[i], &fs[j]).unwrap());
        }
    }
    let mut found = 0;
    for (x, mx) in sample_cube_zero(&sp, &gens, &mut r, 300) {
        if inner_ideals::jordan_profile(&mx).unwrap().n3 > 0 {
            found += 1;
            assert!(!inner_ideals::inner_closure(&[x]).unwrap().is_commutative());
        }
    }
    assert!(found > 0, "no symplectic element with a 3-block sampled");

    let so = MatrixAlgebra::orthogonal(7, gf(5)).unwrap();
    let (es, fs, u) = hyperbolic_basis(&so, &mut r);
    let u = u.expect("odd dimension leaves an anisotropic vector");
    let mut gens = Vec::new();
    for i in 0..es.len() {
        gens.push(so.d_orth(&es[i], &u).unwrap());
        for j in i + 1..es.len() {
            gens.push(so.d_orth(&es[i], &es[j]).unwrap());
            gens.push(so.d_orth(&es[i], &fs[j]).unwrap());
        }
    }
    let mut found = 0;
    for (x, mx) in sample_cube_zero(&so, &gens, &mut r, 300) {
        let p = inner_ideals::jordan_profile(&mx).unwrap();
        if p.n3 > 1 || (p.n3 == 1 && p.n2 > 0) {
            found += 1;
            assert!(!inner_ideals::inner_closure(&[x]).unwrap().is_proper());
        }
    }
    assert!(found > 0, "no orthogonal element with the required profile sampled");
}
