//! The Hochschild complex `HC^•(A, Hom_k(M_i, M_j))` in degrees 0 to 2.
//!
//! `Hom_k(M_i, M_j)` is realised as `dim M_i × dim M_j` matrices. The bimodule
//! actions are `a·φ = ρ_i(a) φ` and `φ·a = φ ρ_j(a)`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::{Algebra, ModuleRep};
use crate::error::{Error, Result};
use crate::linalg::{quotient_basis, FieldSpec, Matrix, Scalar, SpanSolver, SparseVec, Subspace};

/// A 1-cochain `A → Hom_k(M_src, M_dst)`, stored on the basis of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain1 {
    pub src: usize,
    pub dst: usize,
    pub rows: usize,
    pub cols: usize,
    pub values: BTreeMap<usize, Matrix>,
}

/// A 2-cochain `A ⊗ A → Hom_k(M_src, M_dst)`, stored on pairs of basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain2 {
    pub src: usize,
    pub dst: usize,
    pub rows: usize,
    pub cols: usize,
    pub values: BTreeMap<(usize, usize), Matrix>,
}

fn add_entry<K: Ord + Copy>(map: &mut BTreeMap<K, Matrix>, k: K, s: &Scalar, m: &Matrix) {
    if s.is_zero() {
        return;
    }
    match map.get_mut(&k) {
        Some(v) => {
            v.add_scaled(s, m);
            if v.is_zero() {
                map.remove(&k);
            }
        }
        None => {
            let v = m.scale(s);
            if !v.is_zero() {
                map.insert(k, v);
            }
        }
    }
}

macro_rules! cochain_common {
    ($t:ident, $k:ty) => {
        impl $t {
            pub fn zero(src: usize, dst: usize, rows: usize, cols: usize) -> Self {
                $t { src, dst, rows, cols, values: BTreeMap::new() }
            }

            pub fn is_zero(&self) -> bool {
                self.values.is_empty()
            }

            pub fn pair(&self) -> (usize, usize) {
                (self.src, self.dst)
            }

            pub fn add_entry(&mut self, k: $k, s: &Scalar, m: &Matrix) {
                add_entry(&mut self.values, k, s, m);
            }

            /// `self += s·other`.
            pub fn add_scaled(&mut self, s: &Scalar, other: &$t) {
                assert_eq!(self.pair(), other.pair(), "cochains live on different pairs");
                for (k, m) in &other.values {
                    add_entry(&mut self.values, *k, s, m);
                }
            }

            pub fn scale(&self, s: &Scalar) -> $t {
                let mut out = $t::zero(self.src, self.dst, self.rows, self.cols);
                out.add_scaled(s, self);
                out
            }
        }
    };
}

cochain_common!(Cochain1, usize);
cochain_common!(Cochain2, (usize, usize));

impl Cochain1 {
    pub fn value(&self, k: usize, field: FieldSpec) -> Matrix {
        self.values.get(&k).cloned().unwrap_or_else(|| Matrix::zeros(field, self.rows, self.cols))
    }
}

impl Cochain2 {
    pub fn value(&self, a: usize, b: usize, field: FieldSpec) -> Matrix {
        self.values.get(&(a, b)).cloned().unwrap_or_else(|| Matrix::zeros(field, self.rows, self.cols))
    }
}

/// Basis of `Ext¹(M_i, M_j)` by cocycle representatives.
#[derive(Clone, Debug)]
pub struct Ext1Block {
    pub i: usize,
    pub j: usize,
    pub reps: Vec<Cochain1>,
}

impl Ext1Block {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }
}

#[derive(Clone, Debug)]
pub struct ExtBasis {
    pub blocks: Vec<Vec<Ext1Block>>,
}

impl ExtBasis {
    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|row| row.iter().map(Ext1Block::dim).collect()).collect()
    }

    pub fn block(&self, i: usize, j: usize) -> &Ext1Block {
        &self.blocks[i][j]
    }
}

/// The complex for a fixed algebra and module family, with the index data that makes
/// the differentials sparse.
#[derive(Clone, Debug)]
pub struct Complex {
    alg: Algebra,
    family: Vec<ModuleRep>,
    /// `preimage[k]` lists `(a, b, c)` with `c = [b_a b_b : b_k] ≠ 0`.
    preimage: Vec<Vec<(usize, usize, Scalar)>>,
    /// Basis elements acting nontrivially on each module.
    active: Vec<Vec<usize>>,
}

impl Complex {
    pub fn new(alg: &Algebra, family: &[ModuleRep]) -> Self {
        let n = alg.dim();
        let mut preimage = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                for (k, c) in alg.product(a, b) {
                    preimage[*k].push((a, b, c.clone()));
                }
            }
        }
        let active = family.iter().map(|m| (0..n).filter(|&k| !m.act(k).is_zero()).collect()).collect();
        Complex { alg: alg.clone(), family: family.to_vec(), preimage, active }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn family(&self) -> &[ModuleRep] {
        &self.family
    }

    pub fn field(&self) -> FieldSpec {
        self.alg.field()
    }

    pub fn dims(&self, i: usize, j: usize) -> (usize, usize) {
        (self.family[i].dim(), self.family[j].dim())
    }

    pub fn zero1(&self, i: usize, j: usize) -> Cochain1 {
        let (r, c) = self.dims(i, j);
        Cochain1::zero(i, j, r, c)
    }

    pub fn zero2(&self, i: usize, j: usize) -> Cochain2 {
        let (r, c) = self.dims(i, j);
        Cochain2::zero(i, j, r, c)
    }

    /// `d0(φ)(a) = ρ_i(a)φ − φρ_j(a)`.
    pub fn d0(&self, i: usize, j: usize, phi: &Matrix) -> Cochain1 {
        let mut out = self.zero1(i, j);
        let one = self.field().one();
        for k in 0..self.alg.dim() {
            let v = self.family[i].act(k).mul(phi).sub(&phi.mul(self.family[j].act(k)));
            out.add_entry(k, &one, &v);
        }
        out
    }

    /// `d1(ψ)(a,b) = ρ_i(a)ψ(b) − ψ(ab) + ψ(a)ρ_j(b)`.
    pub fn d1(&self, psi: &Cochain1) -> Cochain2 {
        let (i, j) = psi.pair();
        let mut out = self.zero2(i, j);
        let one = self.field().one();
        for (&k, v) in &psi.values {
            for &a in &self.active[i] {
                out.add_entry((a, k), &one, &self.family[i].act(a).mul(v));
            }
            for (a, b, c) in &self.preimage[k] {
                out.add_entry((*a, *b), &-c, v);
            }
            for &b in &self.active[j] {
                out.add_entry((k, b), &one, &v.mul(self.family[j].act(b)));
            }
        }
        out
    }

    /// `d2(c)(a,b,e) = ρ_i(a)c(b,e) − c(ab,e) + c(a,be) − c(a,b)ρ_j(e)`, nonzero entries only.
    pub fn d2(&self, c: &Cochain2) -> BTreeMap<(usize, usize, usize), Matrix> {
        let (i, j) = c.pair();
        let one = self.field().one();
        let minus = -&one;
        let mut out = BTreeMap::new();
        for (&(p, q), v) in &c.values {
            for &a in &self.active[i] {
                add_entry(&mut out, (a, p, q), &one, &self.family[i].act(a).mul(v));
            }
            for (a, b, x) in &self.preimage[p] {
                add_entry(&mut out, (*a, *b, q), &-x, v);
            }
            for (b, e, x) in &self.preimage[q] {
                add_entry(&mut out, (p, *b, *e), x, v);
            }
            for &e in &self.active[j] {
                add_entry(&mut out, (p, q, e), &minus, &v.mul(self.family[j].act(e)));
            }
        }
        out
    }

    /// Fails with the first triple where `d2(c)` is nonzero.
    pub fn check_cocycle(&self, c: &Cochain2) -> Result<()> {
        match self.d2(c).keys().next() {
            None => Ok(()),
            Some(&(a, b, e)) => Err(Error::NotACocycle(a, b, e)),
        }
    }

    pub(crate) fn flatten1(&self, psi: &Cochain1) -> Vec<Scalar> {
        let (r, c) = (psi.rows, psi.cols);
        let mut v = vec![self.field().zero(); self.alg.dim() * r * c];
        for (&k, m) in &psi.values {
            v[k * r * c..(k + 1) * r * c].clone_from_slice(m.entries());
        }
        v
    }

    pub(crate) fn unflatten1(&self, i: usize, j: usize, v: &[Scalar]) -> Cochain1 {
        let (r, c) = self.dims(i, j);
        let mut out = self.zero1(i, j);
        let one = self.field().one();
        for (k, chunk) in v.chunks(r * c).enumerate() {
            if chunk.iter().any(|x| !x.is_zero()) {
                let m = Matrix::from_rows(self.field(), chunk.chunks(c).map(<[Scalar]>::to_vec).collect());
                out.add_entry(k, &one, &m);
            }
        }
        out
    }

    pub(crate) fn flatten2(&self, c: &Cochain2) -> SparseVec {
        let n = self.alg.dim();
        let rc = c.rows * c.cols;
        let mut out = SparseVec::new();
        for (&(a, b), m) in &c.values {
            let base = (a * n + b) * rc;
            for (t, x) in m.entries().iter().enumerate() {
                if !x.is_zero() {
                    out.insert(base + t, x.clone());
                }
            }
        }
        out
    }

    fn unit_cochain(&self, i: usize, j: usize, k: usize, p: usize, q: usize) -> Cochain1 {
        let (r, c) = self.dims(i, j);
        let mut out = self.zero1(i, j);
        out.add_entry(k, &self.field().one(), &Matrix::unit(self.field(), r, c, p, q));
        out
    }

    /// Derivations `Z¹` as a subspace of the flattened `C¹`.
    pub fn derivations(&self, i: usize, j: usize) -> Subspace {
        let (r, c) = self.dims(i, j);
        let n = self.alg.dim();
        let field = self.field();
        let mut solver = SpanSolver::new(field);
        let mut kernel = Vec::new();
        let total = n * r * c;
        for u in 0..total {
            let (k, pq) = (u / (r * c), u % (r * c));
            let image = self.flatten2(&self.d1(&self.unit_cochain(i, j, k, pq / c, pq % c)));
            let e = solver.express(&image);
            if e.in_span() {
                let mut v = vec![field.zero(); total];
                v[u] = field.one();
                for (g, x) in &e.coefficients {
                    v[*g] -= x;
                }
                kernel.push(v);
            }
            solver.push(&image);
        }
        Subspace::from_vectors(field, total, kernel)
    }

    /// Inner derivations `B¹ = im d0`.
    pub fn inner_derivations(&self, i: usize, j: usize) -> Subspace {
        let (r, c) = self.dims(i, j);
        let vs = (0..r * c)
            .map(|t| self.flatten1(&self.d0(i, j, &Matrix::unit(self.field(), r, c, t / c, t % c))))
            .collect();
        Subspace::from_vectors(self.field(), self.alg.dim() * r * c, vs)
    }

    /// `Ext¹(M_i, M_j) = Z¹/B¹` with leftmost-pivot representatives.
    pub fn ext1(&self, i: usize, j: usize) -> Result<Ext1Block> {
        let z = self.derivations(i, j);
        let b = self.inner_derivations(i, j);
        let q = quotient_basis(&b, &z).map_err(|_| Error::Invariant("inner derivations are not cocycles".into()))?;
        let reps = q.complement().iter().map(|v| self.unflatten1(i, j, v)).collect();
        Ok(Ext1Block { i, j, reps })
    }

    pub fn ext1_basis(&self) -> Result<ExtBasis> {
        let r = self.family.len();
        let blocks = (0..r).map(|i| (0..r).map(|j| self.ext1(i, j)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        Ok(ExtBasis { blocks })
    }
}

/// A registered obstruction class `s*`.
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionClass {
    pub name: String,
    pub src: usize,
    pub dst: usize,
    #[serde(skip)]
    pub representative: Cochain2,
}

/// `c = Σ λ_s σ_s + d1(primitive)`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub classes: Vec<(usize, Scalar)>,
    pub primitive: Cochain1,
}

impl Reduction {
    pub fn is_coboundary(&self) -> bool {
        self.classes.is_empty()
    }
}

#[derive(Clone, Debug)]
struct PairSolver {
    solver: SpanSolver,
    /// Generator index → unit cochain `(k, p, q)` or registered class id.
    generators: Vec<Generator>,
}

#[derive(Clone, Debug)]
enum Generator {
    Unit(usize, usize, usize),
    Class(usize),
}

/// The lazily accumulated coordinates on `Ext²`, one span solver per pair.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    classes: Vec<ObstructionClass>,
    solvers: HashMap<(usize, usize), PairSolver>,
    check_cocycles: bool,
}

impl Registry {
    pub fn new(check_cocycles: bool) -> Self {
        Registry { classes: Vec::new(), solvers: HashMap::new(), check_cocycles }
    }

    pub fn classes(&self) -> &[ObstructionClass] {
        &self.classes
    }

    fn solver(&mut self, cx: &Complex, i: usize, j: usize) -> &mut PairSolver {
        self.solvers.entry((i, j)).or_insert_with(|| {
            let (r, c) = cx.dims(i, j);
            let mut solver = SpanSolver::new(cx.field());
            let mut generators = Vec::new();
            // high-degree monomials first, so primitives avoid the generators of A
            for k in (0..cx.alg.dim()).rev() {
                for p in 0..r {
                    for q in 0..c {
                        solver.push(&cx.flatten2(&cx.d1(&cx.unit_cochain(i, j, k, p, q))));
                        generators.push(Generator::Unit(k, p, q));
                    }
                }
            }
            PairSolver { solver, generators }
        })
    }

    fn decode(&self, cx: &Complex, i: usize, j: usize, coefficients: &SparseVec) -> Reduction {
        let ps = &self.solvers[&(i, j)];
        let (r, c) = cx.dims(i, j);
        let mut primitive = cx.zero1(i, j);
        let mut classes = Vec::new();
        for (&g, x) in coefficients {
            match ps.generators[g] {
                Generator::Unit(k, p, q) => primitive.add_entry(k, x, &Matrix::unit(cx.field(), r, c, p, q)),
                Generator::Class(s) => classes.push((s, x.clone())),
            }
        }
        classes.sort_by_key(|(s, _)| *s);
        Reduction { classes, primitive }
    }

    /// Expresses `c` against coboundaries and registered classes, or `None` if a new
    /// class would be needed.
    pub fn reduce(&mut self, cx: &Complex, c: &Cochain2) -> Option<Reduction> {
        let (i, j) = c.pair();
        let flat = cx.flatten2(c);
        let e = self.solver(cx, i, j).solver.express(&flat);
        e.in_span().then(|| self.decode(cx, i, j, &e.coefficients))
    }

    /// Like [`Registry::reduce`], registering `c` itself as a new class when needed.
    pub fn solve_coboundary(&mut self, cx: &Complex, c: &Cochain2) -> Result<Reduction> {
        if self.check_cocycles {
            cx.check_cocycle(c)?;
        }
        if let Some(red) = self.reduce(cx, c) {
            return Ok(red);
        }
        let (i, j) = c.pair();
        let id = self.register(cx, c);
        Ok(Reduction { classes: vec![(id, cx.field().one())], primitive: cx.zero1(i, j) })
    }

    fn register(&mut self, cx: &Complex, c: &Cochain2) -> usize {
        let (i, j) = c.pair();
        let id = self.classes.len();
        let ordinal = self.classes.iter().filter(|s| (s.src, s.dst) == (i, j)).count();
        let name = format!("s{}{}_{}", i + 1, j + 1, ordinal + 1);
        let flat = cx.flatten2(c);
        let ps = self.solver(cx, i, j);
        ps.solver.push(&flat);
        ps.generators.push(Generator::Class(id));
        self.classes.push(ObstructionClass { name, src: i, dst: j, representative: c.clone() });
        id
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual_numbers() -> (Algebra, ModuleRep) {
        let q = FieldSpec::Rational;
        let a = Algebra::polynomial_quotient(q, &[q.zero(), q.zero(), q.one()]).unwrap();
        let m = ModuleRep::one_dim("k", &[q.one(), q.zero()]);
        (a, m)
    }

    #[test]
    fn d0_examples() {
        let (a, m) = dual_numbers();
        let cx = Complex::new(&a, &[m]);
        let q = a.field();
        assert!(cx.d0(0, 0, &Matrix::zeros(q, 1, 1)).is_zero());
        assert!(cx.d0(0, 0, &Matrix::identity(q, 1)).is_zero());
    }

    #[test]
    fn generator_dual_is_a_derivation() {
        let (a, m) = dual_numbers();
        let cx = Complex::new(&a, &[m]);
        let q = a.field();
        let mut psi = cx.zero1(0, 0);
        psi.add_entry(1, &q.one(), &Matrix::identity(q, 1));
        assert!(cx.d1(&psi).is_zero());
        let ext = cx.ext1(0, 0).unwrap();
        assert_eq!(ext.dim(), 1);
        assert_eq!(ext.reps[0], psi);
    }

    #[test]
    fn coboundary_round_trip_and_classes() {
        let (a, m) = dual_numbers();
        let cx = Complex::new(&a, &[m]);
        let q = a.field();
        let mut reg = Registry::new(true);
        let mut psi = cx.zero1(0, 0);
        psi.add_entry(0, &q.from_i64(3), &Matrix::identity(q, 1));
        psi.add_entry(1, &q.from_i64(-2), &Matrix::identity(q, 1));
        let c = cx.d1(&psi);
        let red = reg.solve_coboundary(&cx, &c).unwrap();
        assert!(red.is_coboundary());
        assert_eq!(cx.d1(&red.primitive), c);

        // ψ·ψ for the generator dual is the obstruction class of x^2 = 0
        let mut t = cx.zero2(0, 0);
        t.add_entry((1, 1), &q.one(), &Matrix::identity(q, 1));
        let red = reg.solve_coboundary(&cx, &t).unwrap();
        assert_eq!(red.classes.len(), 1);
        assert_eq!(reg.classes()[0].name, "s11_1");
        let again = reg.solve_coboundary(&cx, &t.scale(&q.from_i64(2))).unwrap();
        assert_eq!(again.classes, vec![(0, q.from_i64(2))]);
    }

    #[test]
    fn non_cocycle_is_rejected() {
        let (a, m) = dual_numbers();
        let cx = Complex::new(&a, &[m]);
        let q = a.field();
        let mut c = cx.zero2(0, 0);
        c.add_entry((0, 1), &q.one(), &Matrix::identity(q, 1));
        let mut reg = Registry::new(true);
        assert!(matches!(reg.solve_coboundary(&cx, &c), Err(Error::NotACocycle(..))));
    }
}
