#![allow(dead_code)]

//! Random small instances shared by the property suites and the acceptance run.

use std::collections::BTreeMap;

use nchull::algebra::quiver::{Arrow, Quiver};
use nchull::algebra::{Algebra, MatricPresentation, ModuleRep};
use nchull::extensions::{build, ext_class, ext_representative, massey_vanishing_check, CofiltrationSpec, Vanishing};
use nchull::hochschild::{Cochain1, Cochain2, Complex, Registry};
use nchull::hull::{run_hull, HullOptions};
use nchull::linalg::{FieldSpec, Matrix, Scalar};
use nchull::massey::cup;
use proptest::prelude::*;

pub const FIELDS: [(&str, FieldSpec); 3] =
    [("rationals", FieldSpec::Rational), ("gf3", FieldSpec::Prime { p: 3 }), ("gf7", FieldSpec::Prime { p: 7 })];

/// Cycles through the drawn integers.
struct Draw {
    values: Vec<i64>,
    at: usize,
}

impl Draw {
    fn next(&mut self, f: FieldSpec) -> Scalar {
        let v = self.values[self.at % self.values.len()];
        self.at += 1;
        f.from_i64(v)
    }

    fn matrix(&mut self, f: FieldSpec, r: usize, c: usize) -> Matrix {
        let mut m = Matrix::zeros(f, r, c);
        for p in 0..r {
            for q in 0..c {
                m[(p, q)] = self.next(f);
            }
        }
        m
    }

    fn cochain(&mut self, cx: &Complex, i: usize, j: usize) -> Cochain1 {
        let (r, c) = cx.dims(i, j);
        let mut out = cx.zero1(i, j);
        let one = cx.field().one();
        for k in 0..cx.algebra().dim() {
            let m = self.matrix(cx.field(), r, c);
            out.add_entry(k, &one, &m);
        }
        out
    }

    /// A random cocycle: a combination of Ext¹ representatives plus a coboundary.
    fn cocycle(&mut self, cx: &Complex, i: usize, j: usize) -> Cochain1 {
        let ext = cx.ext1(i, j).unwrap();
        let f = cx.field();
        let mut out = cx.d0(i, j, &self.matrix(f, cx.dims(i, j).0, cx.dims(i, j).1));
        for rep in &ext.reps {
            out.add_scaled(&self.next(f), rep);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum Shape {
    /// `k[x]/(x^n + c_{n-1} x^{n-1} + … + c_0)`.
    Poly(Vec<i64>),
    /// Path algebra truncated at degree 2, with one graded representation.
    Quiver { points: usize, arrows: Vec<(usize, usize)>, rep: Vec<(usize, usize)> },
}

pub fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![
        prop::collection::vec(-3i64..=3, 2..=4).prop_map(Shape::Poly),
        (1usize..=2)
            .prop_flat_map(|points| {
                (
                    Just(points),
                    prop::collection::vec((0..points, 0..points), 1..=3),
                    prop::collection::vec((0..points, 0usize..=2), 1..=3),
                )
            })
            .prop_map(|(points, arrows, rep)| Shape::Quiver { points, arrows, rep }),
    ]
}

fn instance(f: FieldSpec, shape: &Shape, draw: &mut Draw) -> (Algebra, Vec<ModuleRep>) {
    match shape {
        Shape::Poly(low) => {
            let mut modulus: Vec<Scalar> = low.iter().map(|&c| f.from_i64(c)).collect();
            modulus.push(f.one());
            let a = Algebra::polynomial_quotient(f, &modulus).unwrap();
            let mut family = vec![ModuleRep::regular(&a)];
            let candidates: Vec<i64> = match f {
                FieldSpec::Prime { p } => (0..p as i64).collect(),
                FieldSpec::Rational => (-4..=4).collect(),
            };
            for r in candidates {
                let r = f.from_i64(r);
                let mut value = f.zero();
                let mut power = f.one();
                let mut powers = Vec::new();
                for c in &modulus {
                    value += &(c * &power);
                    powers.push(power.clone());
                    power = &power * &r;
                }
                if value.is_zero() && family.len() < 3 {
                    powers.truncate(a.dim());
                    family.push(ModuleRep::one_dim(format!("root{}", family.len()), &powers));
                }
            }
            (a, family)
        }
        Shape::Quiver { points, arrows, rep } => {
            let q = Quiver {
                points: *points,
                arrows: arrows.iter().enumerate().map(|(k, &(s, d))| Arrow { name: format!("a{k}"), src: s, dst: d }).collect(),
            };
            let pa = MatricPresentation::new(f, q.clone(), vec![], 2).unwrap().truncated_algebra().unwrap();
            let mut family: Vec<ModuleRep> = (0..*points).map(|p| pa.vertex_module(&format!("S{}", p + 1), p).unwrap()).collect();
            // basis vector v sits at (point, level); arrows raise the level strictly
            let d = rep.len();
            let es: Vec<Matrix> = (0..*points)
                .map(|p| {
                    let mut m = Matrix::zeros(f, d, d);
                    for (v, &(pt, _)) in rep.iter().enumerate() {
                        if pt == p {
                            m[(v, v)] = f.one();
                        }
                    }
                    m
                })
                .collect();
            let xs: Vec<Matrix> = q
                .arrows
                .iter()
                .map(|a| {
                    let mut m = Matrix::zeros(f, d, d);
                    for (v, &(pv, lv)) in rep.iter().enumerate() {
                        for (w, &(pw, lw)) in rep.iter().enumerate() {
                            if pv == a.src && pw == a.dst && lw > lv {
                                m[(v, w)] = draw.next(f);
                            }
                        }
                    }
                    m
                })
                .collect();
            family.push(pa.module_from_generators("R", &es, &xs).unwrap());
            (pa.algebra, family)
        }
    }
}

fn d2_of_cup(cx: &Complex, alpha: &Cochain1, beta: &Cochain1) {
    // d2(α·β) = d1(α)·β − α·d1(β), checked on every basis triple
    let f = cx.field();
    let n = cx.algebra().dim();
    let lhs = cx.d2(&cup(alpha, beta).unwrap());
    let (da, db) = (cx.d1(alpha), cx.d1(beta));
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let rhs = da.value(a, b, f).mul(&beta.value(c, f)).sub(&alpha.value(a, f).mul(&db.value(b, c, f)));
                let l = lhs.get(&(a, b, c)).cloned().unwrap_or_else(|| Matrix::zeros(f, rhs.rows(), rhs.cols()));
                assert_eq!(l, rhs, "Leibniz fails at ({a}, {b}, {c})");
            }
        }
    }
}

fn is_coboundary(cx: &Complex, c: &Cochain2) -> bool {
    Registry::new(false).reduce(cx, c).is_some_and(|r| r.is_coboundary())
}

pub fn complex_identities(f: FieldSpec, shape: Shape, values: Vec<i64>, perm_seed: Vec<usize>) {
    let mut draw = Draw { values, at: 0 };
    let (alg, family) = instance(f, &shape, &mut draw);
    alg.validate().unwrap();
    let cx = Complex::new(&alg, &family);
    let r = family.len();
    let (i, j, l) = (0, r - 1, perm_seed[0] % r);

    // d1∘d0 = 0 and d2∘d1 = 0
    let (di, dj) = cx.dims(i, j);
    let phi = draw.matrix(f, di, dj);
    assert!(cx.d1(&cx.d0(i, j, &phi)).is_zero());
    let psi = draw.cochain(&cx, i, j);
    assert!(cx.d2(&cx.d1(&psi)).is_empty());

    // solve_coboundary recovers a primitive of d1(ψ)
    let target = cx.d1(&psi);
    let red = Registry::new(true).solve_coboundary(&cx, &target).unwrap();
    assert!(red.is_coboundary());
    assert_eq!(cx.d1(&red.primitive), target);

    // products of cocycles are cocycles; their class ignores coboundary changes
    let alpha = draw.cocycle(&cx, i, j);
    let beta = draw.cocycle(&cx, j, l);
    assert!(cx.d1(&alpha).is_zero() && cx.d1(&beta).is_zero());
    let ab = cup(&alpha, &beta).unwrap();
    cx.check_cocycle(&ab).unwrap();
    let (dj2, dl) = cx.dims(j, l);
    let mut beta2 = beta.clone();
    beta2.add_scaled(&f.one(), &cx.d0(j, l, &draw.matrix(f, dj2, dl)));
    let mut alpha2 = alpha.clone();
    alpha2.add_scaled(&f.one(), &cx.d0(i, j, &draw.matrix(f, di, dj)));
    let mut diff = cup(&alpha2, &beta2).unwrap();
    diff.add_scaled(&f.from_i64(-1), &ab);
    assert!(is_coboundary(&cx, &diff));

    // Leibniz sign on arbitrary cochains
    let gamma = draw.cochain(&cx, j, l);
    d2_of_cup(&cx, &psi, &gamma);

    // Ext¹ dimensions do not depend on the order of the basis of A
    let n = alg.dim();
    let mut perm: Vec<usize> = (0..n).collect();
    for (k, s) in perm_seed.iter().enumerate().take(n) {
        perm.swap(k % n, s % n);
    }
    let palg = alg.permuted(&perm);
    palg.validate().unwrap();
    let pfam: Vec<ModuleRep> = family
        .iter()
        .map(|m| ModuleRep::new(m.name.clone(), m.dim(), perm.iter().map(|&o| m.act(o).clone()).collect()))
        .collect();
    let pcx = Complex::new(&palg, &pfam);
    assert_eq!(cx.ext1_basis().unwrap().dims(), pcx.ext1_basis().unwrap().dims());
    if matches!(shape, Shape::Poly(_)) {
        let opts = HullOptions { degree_cap: 4, check_cocycles: true };
        let h = run_hull(&alg, &family, opts).unwrap();
        let ph = run_hull(&palg, &pfam, opts).unwrap();
        assert_eq!(h.graded_dims(), ph.graded_dims());
    }
}

pub fn massey_roundtrip(f: FieldSpec, shape: Shape, values: Vec<i64>, chain_seed: Vec<usize>) {
    let mut draw = Draw { values, at: 0 };
    let (alg, family) = instance(f, &shape, &mut draw);
    let cx = Complex::new(&alg, &family);
    let ext = cx.ext1_basis().unwrap();
    let r = family.len();
    let chain: Vec<usize> = chain_seed.iter().map(|s| s % r).collect();
    let coords: Vec<Vec<Scalar>> = chain
        .windows(2)
        .map(|w| (0..ext.block(w[0], w[1]).dim()).map(|_| draw.next(f)).collect())
        .collect();
    let consecutive: Vec<Cochain1> = chain
        .windows(2)
        .zip(&coords)
        .map(|(w, c)| ext_representative(&cx, &ext, w[0], w[1], c).unwrap())
        .collect();
    let mut reg = Registry::new(true);
    match massey_vanishing_check(&cx, &mut reg, consecutive).unwrap() {
        Vanishing::Constructible { system, extension } => {
            system.verify(&cx).unwrap();
            extension.module.validate(&alg).unwrap();
            for (k, c) in coords.iter().enumerate() {
                assert_eq!(&ext_class(&cx, &ext, &extension.induced_cochain(&cx, k)).unwrap(), c);
            }
            let flag = extension.flag();
            for (k, sub) in flag.iter().enumerate() {
                let rest: usize = chain[k..].iter().map(|&m| family[m].dim()).sum();
                assert_eq!(sub.dim(), rest);
            }
            // the user-side direction: change the top slot by a cocycle and rebuild
            let mut spec = CofiltrationSpec::from_defining_system(&cx, &system);
            let top = (0, chain.len() - 1);
            let z = draw.cocycle(&cx, chain[0], chain[chain.len() - 1]);
            spec.psi.get_mut(&top).unwrap().add_scaled(&f.one(), &z);
            let rebuilt = build(&cx, &spec).unwrap();
            let sys = rebuilt.spec.to_defining_system(&cx);
            sys.verify(&cx).unwrap();
            assert_eq!(cx.d1(&sys.alpha[&top]), sys.product_sum(&cx, 0, chain.len() - 1).unwrap());
        }
        Vanishing::Obstructed { order, slot, classes, .. } => {
            assert!(chain.len() >= 3);
            assert!(!classes.is_empty());
            assert_eq!(order, slot.1 - slot.0);
            // the associativity equations cannot hold with these classes: build rejects zero fillers
            let psi: BTreeMap<(usize, usize), Cochain1> = chain
                .windows(2)
                .enumerate()
                .zip(&coords)
                .map(|((k, w), c)| ((k, k + 1), ext_representative(&cx, &ext, w[0], w[1], c).unwrap()))
                .collect();
            assert!(build(&cx, &CofiltrationSpec { chain: chain.clone(), psi }).is_err());
        }
    }
}


pub fn complex_case() -> impl Strategy<Value = (Shape, Vec<i64>, Vec<usize>)> {
    (shape(), prop::collection::vec(-3i64..=3, 64), prop::collection::vec(0usize..16, 1..16))
}

pub fn massey_case() -> impl Strategy<Value = (Shape, Vec<i64>, Vec<usize>)> {
    (shape(), prop::collection::vec(-3i64..=3, 64), prop::collection::vec(0usize..3, 2..=4))
}
