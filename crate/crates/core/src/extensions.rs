//! Iterated extensions built from block upper-triangular cochain data, and their relation
//! to matric Massey products.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{Algebra, ModuleRep};
use crate::error::{Error, Result};
use crate::hochschild::{Cochain1, Complex, ExtBasis, Registry};
use crate::linalg::{Matrix, Scalar, SpanSolver, SparseVec, Subspace};
use crate::massey::{complete_system, cup, massey_value, DefiningSystem, Extension, MasseySign};

/// A chain of family members `M_{chain[0]}, …, M_{chain[r-1]}` with cochains `ψ^{ij}`
/// (0-based positions) satisfying `-d(ψ^{ij}) = Σ_l ψ^{il}·ψ^{lj}`. Missing slots are zero.
#[derive(Clone, Debug)]
pub struct CofiltrationSpec {
    pub chain: Vec<usize>,
    pub psi: BTreeMap<(usize, usize), Cochain1>,
}

impl CofiltrationSpec {
    pub fn r(&self) -> usize {
        self.chain.len()
    }

    fn slot(&self, cx: &Complex, i: usize, j: usize) -> Cochain1 {
        self.psi.get(&(i, j)).cloned().unwrap_or_else(|| cx.zero1(self.chain[i], self.chain[j]))
    }

    /// Checks endpoints and every associativity equation, innermost diagonals first.
    pub fn verify(&self, cx: &Complex) -> Result<()> {
        let r = self.r();
        if r == 0 {
            return Err(Error::Schema("a cofiltration needs at least one module".into()));
        }
        if let Some(&bad) = self.chain.iter().find(|&&m| m >= cx.family().len()) {
            return Err(Error::Schema(format!("chain refers to module {} outside the family", bad + 1)));
        }
        for (&(i, j), p) in &self.psi {
            if i >= j || j >= r {
                return Err(Error::Schema(format!("cochain slot ({}, {}) is not above the diagonal", i + 1, j + 1)));
            }
            let (di, dj) = cx.dims(self.chain[i], self.chain[j]);
            if p.src != self.chain[i] || p.dst != self.chain[j] || p.rows != di || p.cols != dj {
                return Err(Error::EndpointMismatch(format!("cochain in slot ({}, {})", i + 1, j + 1)));
            }
        }
        let one = cx.field().one();
        for g in 1..r {
            for i in 0..r - g {
                let j = i + g;
                let mut lhs = cx.d1(&self.slot(cx, i, j));
                for l in i + 1..j {
                    lhs.add_scaled(&one, &cup(&self.slot(cx, i, l), &self.slot(cx, l, j))?);
                }
                if !lhs.is_zero() {
                    return Err(Error::NotAssociativeAction(i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    /// The defining system `α_ij = (-1)^{j-i+1} ψ^{ij}`.
    pub fn to_defining_system(&self, cx: &Complex) -> DefiningSystem {
        let r = self.r();
        let mut alpha = BTreeMap::new();
        for i in 0..r {
            for j in i + 1..r {
                let s = sign(j - i + 1, cx);
                alpha.insert((i, j), self.slot(cx, i, j).scale(&s));
            }
        }
        DefiningSystem { chain: self.chain.clone(), alpha }
    }

    /// Inverse of [`CofiltrationSpec::to_defining_system`]; slot `(0, r-1)` must be filled.
    pub fn from_defining_system(cx: &Complex, sys: &DefiningSystem) -> Self {
        let psi = sys.alpha.iter().map(|(&(i, j), a)| ((i, j), a.scale(&sign(j - i + 1, cx)))).collect();
        CofiltrationSpec { chain: sys.chain.clone(), psi }
    }
}

fn sign(e: usize, cx: &Complex) -> Scalar {
    if e % 2 == 0 {
        cx.field().one()
    } else {
        cx.field().from_i64(-1)
    }
}

#[derive(Clone, Debug)]
pub struct IteratedExtension {
    pub module: ModuleRep,
    /// Row offset of each block.
    pub offsets: Vec<usize>,
    pub spec: CofiltrationSpec,
}

impl IteratedExtension {
    /// `F_k`: vectors supported on blocks `k..r`. Each is a submodule and `F_k / F_{k+1} ≅ M_k`.
    pub fn flag(&self) -> Vec<Subspace> {
        let field = self.module.actions().first().map(Matrix::field).unwrap_or(crate::linalg::FieldSpec::Rational);
        let n = self.module.dim();
        self.offsets
            .iter()
            .map(|&o| {
                let vecs = (o..n)
                    .map(|k| {
                        let mut v = vec![field.zero(); n];
                        v[k] = field.one();
                        v
                    })
                    .collect();
                Subspace::from_vectors(field, n, vecs)
            })
            .collect()
    }

    /// The cochain of the length-2 subquotient on blocks `(i, i+1)`.
    pub fn induced_cochain(&self, cx: &Complex, i: usize) -> Cochain1 {
        let (a, b) = (self.spec.chain[i], self.spec.chain[i + 1]);
        let (r, c) = cx.dims(a, b);
        let mut out = cx.zero1(a, b);
        let one = cx.field().one();
        for (k, m) in self.module.actions().iter().enumerate() {
            let mut block = Matrix::zeros(cx.field(), r, c);
            for p in 0..r {
                for q in 0..c {
                    block[(p, q)] = m[(self.offsets[i] + p, self.offsets[i + 1] + q)].clone();
                }
            }
            if !block.is_zero() {
                out.add_entry(k, &one, &block);
            }
        }
        out
    }
}

/// Block upper-triangular action: `ρ_{chain[i]}` on the diagonal, `ψ^{ij}` above it.
pub fn build(cx: &Complex, spec: &CofiltrationSpec) -> Result<IteratedExtension> {
    spec.verify(cx)?;
    let field = cx.field();
    let family = cx.family();
    let mut offsets = Vec::with_capacity(spec.r());
    let mut n = 0;
    for &m in &spec.chain {
        offsets.push(n);
        n += family[m].dim();
    }
    let alg = cx.algebra();
    let actions = (0..alg.dim())
        .map(|k| {
            let mut out = Matrix::zeros(field, n, n);
            for i in 0..spec.r() {
                for j in i..spec.r() {
                    let block = if i == j { family[spec.chain[i]].act(k).clone() } else { spec.slot(cx, i, j).value(k, field) };
                    for p in 0..block.rows() {
                        for q in 0..block.cols() {
                            out[(offsets[i] + p, offsets[j] + q)] = block[(p, q)].clone();
                        }
                    }
                }
            }
            out
        })
        .collect();
    let name = spec.chain.iter().map(|&m| family[m].name.as_str()).collect::<Vec<_>>().join("|");
    let module = ModuleRep::new(format!("E({name})"), n, actions);
    module.validate(alg)?;
    Ok(IteratedExtension { module, offsets, spec: spec.clone() })
}

#[derive(Clone, Debug)]
pub enum Vanishing {
    Constructible { system: DefiningSystem, extension: IteratedExtension },
    /// The found system is obstructed at `order` (number of classes in the sub-product).
    Obstructed {
        order: usize,
        slot: (usize, usize),
        /// Coordinates in the defining-system convention.
        classes: Vec<(usize, Scalar)>,
        /// Coordinates in the lifting convention.
        lifting_classes: Vec<(usize, Scalar)>,
        /// Whether changing the penultimate diagonal by cocycles can kill the value.
        cleared_by_top_adjustment: bool,
    },
}

/// Runs the defining-system recursion on consecutive cocycles and builds the extension
/// when the top value is a coboundary.
pub fn massey_vanishing_check(cx: &Complex, reg: &mut Registry, consecutive: Vec<Cochain1>) -> Result<Vanishing> {
    let start = DefiningSystem::new(cx, consecutive)?;
    let r = start.r();
    let sys = match complete_system(cx, reg, &start)? {
        Extension::Extended(s) => s,
        Extension::Complete => start,
        Extension::Obstructed { slot, classes } => {
            return Ok(obstructed(cx, slot, classes, false));
        }
    };
    if r == 2 {
        let spec = CofiltrationSpec::from_defining_system(cx, &sys);
        let extension = build(cx, &spec)?;
        return Ok(Vanishing::Constructible { system: sys, extension });
    }
    let value = massey_value(cx, reg, &sys, MasseySign::DefiningSystem)?;
    let raw = sys.product_sum(cx, 0, r - 1)?;
    let red = reg.solve_coboundary(cx, &raw)?;
    if value.is_zero() {
        let mut full = sys;
        full.alpha.insert((0, r - 1), red.primitive);
        full.verify(cx)?;
        let spec = CofiltrationSpec::from_defining_system(cx, &full);
        let extension = build(cx, &spec)?;
        return Ok(Vanishing::Constructible { system: full, extension });
    }
    let cleared = top_adjustment_clears(cx, reg, &sys, &value.classes)?;
    Ok(obstructed(cx, (0, r - 1), value.classes, cleared))
}

fn obstructed(cx: &Complex, slot: (usize, usize), classes: Vec<(usize, Scalar)>, cleared: bool) -> Vanishing {
    let order = slot.1 - slot.0;
    let f = MasseySign::LiftingAction.factor(order + 1, cx.field());
    let lifting_classes = classes.iter().map(|(s, x)| (*s, x * &f)).collect();
    Vanishing::Obstructed { order, slot, classes, lifting_classes, cleared_by_top_adjustment: cleared }
}

/// Adding cocycles `z` to `α_{0,r-2}` or `α_{1,r-1}` moves the value by `z·α_{r-2,r-1}` or
/// `α_{01}·z`; checks whether the value lies in the span of those classes.
fn top_adjustment_clears(cx: &Complex, reg: &Registry, sys: &DefiningSystem, value: &[(usize, Scalar)]) -> Result<bool> {
    let r = sys.r();
    let mut scratch = reg.clone();
    let ext = cx.ext1_basis()?;
    let (c0, c1, c2, c3) = (sys.chain[0], sys.chain[1], sys.chain[r - 2], sys.chain[r - 1]);
    let mut moves = Vec::new();
    for z in &ext.block(c0, c2).reps {
        moves.push(cup(z, &sys.alpha[&(r - 2, r - 1)])?);
    }
    for z in &ext.block(c1, c3).reps {
        moves.push(cup(&sys.alpha[&(0, 1)], z)?);
    }
    let mut coords = Vec::new();
    for m in &moves {
        coords.push(scratch.solve_coboundary(cx, m)?.classes);
    }
    let n = scratch.classes().len();
    let field = cx.field();
    let dense = |c: &[(usize, Scalar)]| {
        let mut v = vec![field.zero(); n];
        for (s, x) in c {
            v[*s] = x.clone();
        }
        v
    };
    let span = Subspace::from_vectors(field, n, coords.iter().map(|c| dense(c)).collect());
    Ok(span.contains(&dense(value)))
}

/// Coordinates of the class of a 1-cocycle in the chosen `Ext¹` basis.
pub fn ext_class(cx: &Complex, ext: &ExtBasis, psi: &Cochain1) -> Result<Vec<Scalar>> {
    let field = cx.field();
    let block = ext.block(psi.src, psi.dst);
    let sparse = |v: Vec<Scalar>| -> SparseVec { v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect() };
    let mut solver = SpanSolver::new(field);
    for rep in &block.reps {
        solver.push(&sparse(cx.flatten1(rep)));
    }
    for b in cx.inner_derivations(psi.src, psi.dst).basis() {
        solver.push(&sparse(b.clone()));
    }
    let e = solver.express(&sparse(cx.flatten1(psi)));
    if !e.in_span() {
        return Err(Error::HypothesisViolated(format!(
            "cochain on ({}, {}) is not a cocycle",
            psi.src + 1,
            psi.dst + 1
        )));
    }
    Ok((0..block.dim()).map(|l| e.coefficients.get(&l).cloned().unwrap_or_else(|| field.zero())).collect())
}

/// `Σ c_l ψ_l` over the chosen representatives of `Ext¹(M_i, M_j)`.
pub fn ext_representative(cx: &Complex, ext: &ExtBasis, i: usize, j: usize, coords: &[Scalar]) -> Result<Cochain1> {
    let block = ext.block(i, j);
    if coords.len() != block.dim() {
        return Err(Error::Shape(format!(
            "Ext¹ on ({}, {}) has dimension {}, got {} coordinates",
            i + 1,
            j + 1,
            block.dim(),
            coords.len()
        )));
    }
    let mut out = cx.zero1(i, j);
    for (c, rep) in coords.iter().zip(&block.reps) {
        out.add_scaled(c, rep);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Annihilation {
    /// `E·K = 0`.
    pub annihilates: bool,
    /// `M_i·K = 0` for every chain member.
    pub modules_killed: bool,
    /// `ψ^{ij}(K) = 0` for every slot.
    pub cochains_killed: bool,
}

fn acts_as_zero(m: &ModuleRep, k: &Subspace) -> bool {
    k.basis().iter().all(|x| m.rho(x).is_zero())
}

pub fn annihilation_check(alg: &Algebra, cx: &Complex, e: &IteratedExtension, k: &Subspace) -> Result<Annihilation> {
    if k.ambient_dim() != alg.dim() {
        return Err(Error::Shape(format!("ideal lives in dimension {}, algebra has {}", k.ambient_dim(), alg.dim())));
    }
    if !alg.is_two_sided_ideal(k) {
        return Err(Error::NotAnIdeal);
    }
    let field = alg.field();
    let modules_killed = e.spec.chain.iter().all(|&m| acts_as_zero(&cx.family()[m], k));
    let cochains_killed = e.spec.psi.values().all(|p| {
        k.basis().iter().all(|x| {
            let mut v = Matrix::zeros(field, p.rows, p.cols);
            for (i, c) in x.iter().enumerate() {
                if !c.is_zero() {
                    v.add_scaled(c, &p.value(i, field));
                }
            }
            v.is_zero()
        })
    });
    Ok(Annihilation { annihilates: acts_as_zero(&e.module, k), modules_killed, cochains_killed })
}
