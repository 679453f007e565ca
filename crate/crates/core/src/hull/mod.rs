//! Level-by-level construction of the pro-representing hull and its versal action.

mod quotient;

use std::collections::BTreeMap;

use serde::Serialize;

pub use quotient::TruncatedQuotient;

use crate::algebra::quiver::{poly_add_term, render_poly, Arrow, Poly, Quiver, Word};
use crate::algebra::{Algebra, ModuleRep};
use crate::error::{Error, Result};
use crate::hochschild::{Cochain1, Cochain2, Complex, ExtBasis, Registry};
use crate::linalg::{Matrix, Scalar, Subspace};
use crate::massey::cup;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HullOptions {
    pub degree_cap: usize,
    /// Verify every defect with `d2` before reducing it.
    pub check_cocycles: bool,
}

impl Default for HullOptions {
    fn default() -> Self {
        HullOptions { degree_cap: 8, check_cocycles: true }
    }
}

/// One relation `f_s`, attached to the obstruction class `s`.
#[derive(Clone, Debug)]
pub struct HullRelation {
    pub name: String,
    pub class: usize,
    pub src: usize,
    pub dst: usize,
    pub poly: Poly,
    /// `(level, relation truncated at that level)`.
    pub history: Vec<(usize, Poly)>,
}

impl HullRelation {
    /// The relation as it stood after `level`.
    pub fn at_level(&self, level: usize) -> Option<&Poly> {
        self.history.iter().rev().find(|(l, _)| *l <= level).map(|(_, p)| p)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelRecord {
    pub level: usize,
    pub relations: Vec<String>,
    pub new_classes: Vec<String>,
    pub normal_monomials: usize,
}

/// The hull `H` (as a truncated presentation) with the versal action `ψ_w`.
#[derive(Clone, Debug)]
pub struct ProCouple {
    pub complex: Complex,
    pub ext: ExtBasis,
    pub quiver: Quiver,
    pub relations: Vec<HullRelation>,
    pub quotient: TruncatedQuotient,
    /// `ψ_w` for every normal word of positive degree.
    pub action: BTreeMap<Word, Cochain1>,
    pub stabilized: bool,
    pub registry: Registry,
    pub levels: Vec<LevelRecord>,
}

/// `t{i}{j}_{l}`, or `t{i}{j}` when `Ext¹(M_i, M_j)` is one-dimensional.
pub fn arrow_label(i: usize, j: usize, l: usize, d: usize) -> String {
    if d == 1 {
        format!("t{}{}", i + 1, j + 1)
    } else {
        format!("t{}{}_{}", i + 1, j + 1, l + 1)
    }
}

/// The quiver dual to the Ext¹ basis, arrows ordered by `(i, j, l)`.
pub fn hull_quiver(ext: &ExtBasis) -> Quiver {
    let r = ext.blocks.len();
    let mut arrows = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let d = ext.block(i, j).dim();
            for l in 0..d {
                arrows.push(Arrow { name: arrow_label(i, j, l, d), src: i, dst: j });
            }
        }
    }
    Quiver { points: r, arrows }
}

impl ProCouple {
    pub fn field(&self) -> crate::linalg::FieldSpec {
        self.complex.field()
    }

    /// Highest degree for which the action is known.
    pub fn top_degree(&self) -> usize {
        self.quotient.top()
    }

    /// Basis of `H` (stabilized) or of `H / J^{top+1}` (truncated): the normal words.
    pub fn basis(&self) -> &[Word] {
        self.quotient.normal()
    }

    pub fn dim(&self) -> usize {
        self.basis().len()
    }

    /// `dim H_ij`.
    pub fn block_dims(&self) -> Vec<Vec<usize>> {
        let r = self.quiver.points;
        let mut out = vec![vec![0; r]; r];
        for w in self.basis() {
            out[w.start][w.end(&self.quiver)] += 1;
        }
        out
    }

    /// Number of normal words per degree.
    pub fn graded_dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.top_degree() + 1];
        for w in self.basis() {
            out[w.degree()] += 1;
        }
        out
    }

    pub fn render_relation(&self, p: &Poly) -> String {
        render_poly(p, &self.quiver)
    }

    /// `η(a)` coefficient on the basis word `w`: `ρ_i(a)` for idempotents, `ψ_w(a)` otherwise.
    pub fn eta_coefficient(&self, w: &Word, a: usize) -> Matrix {
        let field = self.field();
        if w.degree() == 0 {
            return self.complex.family()[w.start].act(a).clone();
        }
        let (r, c) = self.complex.dims(w.start, w.end(&self.quiver));
        self.action.get(w).and_then(|psi| psi.values.get(&a).cloned()).unwrap_or_else(|| Matrix::zeros(field, r, c))
    }
}

struct HullState {
    cx: Complex,
    ext: ExtBasis,
    quiver: Quiver,
    relations: Vec<HullRelation>,
    action: BTreeMap<Word, Cochain1>,
    registry: Registry,
    levels: Vec<LevelRecord>,
}

impl HullState {
    fn relation_polys(&self) -> Vec<Poly> {
        self.relations.iter().map(|r| r.poly.clone()).collect()
    }

    /// `c_w = Σ [NF(uv) : w] ψ_u·ψ_v` for every normal `w` of degree `n`.
    fn defects(&self, q: &TruncatedQuotient, n: usize) -> Result<BTreeMap<Word, Cochain2>> {
        let field = self.cx.field();
        let mut out: BTreeMap<Word, Cochain2> = q
            .normal_of_degree(n)
            .map(|w| (w.clone(), self.cx.zero2(w.start, w.end(&self.quiver))))
            .collect();
        let known: Vec<(&Word, &Cochain1)> = self.action.iter().filter(|(w, _)| w.degree() < n).collect();
        for (u, pu) in &known {
            for (v, pv) in &known {
                if u.degree() + v.degree() > n {
                    continue;
                }
                let Some(uv) = u.concat(v, &self.quiver) else { continue };
                let nf = q.nf(&uv, field);
                let mut prod = None;
                for (w, c) in nf.iter().filter(|(w, _)| w.degree() == n) {
                    let p = match &prod {
                        Some(p) => p,
                        None => prod.insert(cup(pu, pv)?),
                    };
                    if let Some(d) = out.get_mut(w) {
                        d.add_scaled(c, p);
                    }
                }
            }
        }
        Ok(out)
    }

    fn step(&mut self, n: usize) -> Result<TruncatedQuotient> {
        let field = self.cx.field();
        let q1 = TruncatedQuotient::new(field, &self.quiver, &self.relation_polys(), n);
        let defects = self.defects(&q1, n)?;
        let first_new = self.registry.classes().len();
        let mut primitives = BTreeMap::new();
        let mut changed = false;
        for (w, c) in &defects {
            let red = self.registry.solve_coboundary(&self.cx, c)?;
            for (s, lambda) in &red.classes {
                changed = true;
                let idx = match self.relations.iter().position(|r| r.class == *s) {
                    Some(i) => i,
                    None => {
                        let cls = &self.registry.classes()[*s];
                        let name = cls.name.replacen('s', "f", 1);
                        self.relations.push(HullRelation {
                            name,
                            class: *s,
                            src: cls.src,
                            dst: cls.dst,
                            poly: Poly::new(),
                            history: Vec::new(),
                        });
                        self.relations.len() - 1
                    }
                };
                poly_add_term(&mut self.relations[idx].poly, w.clone(), lambda);
            }
            primitives.insert(w.clone(), red.primitive);
        }
        let (q, defects) = if changed {
            let q2 = TruncatedQuotient::new(field, &self.quiver, &self.relation_polys(), n);
            let d2 = self.defects(&q2, n)?;
            primitives.clear();
            for (w, c) in &d2 {
                match self.registry.reduce(&self.cx, c) {
                    Some(red) if red.is_coboundary() => {
                        primitives.insert(w.clone(), red.primitive);
                    }
                    _ => {
                        return Err(Error::Invariant(format!(
                            "defect at {} is not a coboundary after imposing the relations",
                            w.render(&self.quiver)
                        )))
                    }
                }
            }
            (q2, d2)
        } else {
            (q1, defects)
        };
        let minus = -field.one();
        for (w, beta) in primitives {
            let psi = beta.scale(&minus);
            let mut check = self.cx.d1(&psi);
            check.add_scaled(&field.one(), &defects[&w]);
            if !check.is_zero() {
                return Err(Error::Invariant(format!("lifted action is not multiplicative at {}", w.render(&self.quiver))));
            }
            self.action.insert(w, psi);
        }
        for r in &mut self.relations {
            if r.history.last().is_none_or(|(_, p)| *p != r.poly) {
                r.history.push((n, r.poly.clone()));
            }
        }
        self.levels.push(LevelRecord {
            level: n,
            relations: self.relations.iter().map(|r| format!("{} = {}", r.name, render_poly(&r.poly, &self.quiver))).collect(),
            new_classes: self.registry.classes()[first_new..].iter().map(|c| c.name.clone()).collect(),
            normal_monomials: q.normal_of_degree(n).count(),
        });
        Ok(q)
    }
}

/// Tangent level: one arrow per Ext¹ basis vector, acting by its representative.
fn tangent_level(cx: Complex, ext: ExtBasis, check_cocycles: bool) -> HullState {
    let quiver = hull_quiver(&ext);
    let mut action = BTreeMap::new();
    let mut a = 0;
    for row in &ext.blocks {
        for block in row {
            for rep in &block.reps {
                action.insert(Word { start: block.i, arrows: vec![a] }, rep.clone());
                a += 1;
            }
        }
    }
    HullState {
        cx,
        ext,
        quiver,
        relations: Vec::new(),
        action,
        registry: Registry::new(check_cocycles),
        levels: Vec::new(),
    }
}

/// Runs the hull construction from a given Ext¹ basis.
pub fn run_hull_with_basis(cx: Complex, ext: ExtBasis, opts: HullOptions) -> Result<ProCouple> {
    let mut st = tangent_level(cx, ext, opts.check_cocycles);
    let field = st.cx.field();
    let mut q = TruncatedQuotient::new(field, &st.quiver, &[], 1);
    let mut stabilized = st.quiver.arrows.is_empty();
    let mut n = 2;
    while !stabilized && n <= opts.degree_cap {
        q = st.step(n)?;
        stabilized = q.normal_of_degree(n).next().is_none();
        n += 1;
    }
    Ok(ProCouple {
        complex: st.cx,
        ext: st.ext,
        quiver: st.quiver,
        relations: st.relations,
        quotient: q,
        action: st.action,
        stabilized,
        registry: st.registry,
        levels: st.levels,
    })
}

pub fn run_hull(alg: &Algebra, family: &[ModuleRep], opts: HullOptions) -> Result<ProCouple> {
    let cx = Complex::new(alg, family);
    let ext = cx.ext1_basis()?;
    run_hull_with_basis(cx, ext, opts)
}

/// `K_n = ker η_n` for `n = 1..=top+1`, where `η_n` uses words of degree `< n`.
pub fn kernel_chain(pc: &ProCouple) -> Vec<Subspace> {
    let alg = pc.complex.algebra();
    let field = alg.field();
    (1..=pc.top_degree() + 1)
        .map(|n| {
            let words: Vec<&Word> = pc.basis().iter().filter(|w| w.degree() < n).collect();
            let rows: Vec<Vec<Scalar>> = (0..alg.dim())
                .map(|a| words.iter().flat_map(|w| pc.eta_coefficient(w, a).entries().to_vec()).collect())
                .collect();
            if rows.first().is_none_or(Vec::is_empty) {
                return Subspace::full(field, alg.dim());
            }
            Matrix::from_rows(field, rows).transpose().kernel()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;

    fn truncated_polynomial(field: FieldSpec, n: usize) -> (Algebra, ModuleRep) {
        let mut modulus = vec![field.zero(); n + 1];
        modulus[n] = field.one();
        let a = Algebra::polynomial_quotient(field, &modulus).unwrap();
        let mut vals = vec![field.zero(); n];
        vals[0] = field.one();
        (a, ModuleRep::one_dim("k", &vals))
    }

    #[test]
    fn dual_numbers_hull() {
        let (a, m) = truncated_polynomial(FieldSpec::Rational, 2);
        let pc = run_hull(&a, &[m], HullOptions::default()).unwrap();
        assert!(pc.stabilized);
        assert_eq!(pc.dim(), 2);
        assert_eq!(pc.relations.len(), 1);
        assert_eq!(pc.render_relation(&pc.relations[0].poly), "t11^2");
        let chain = kernel_chain(&pc);
        assert_eq!(chain[0].dim(), 1);
        assert_eq!(chain.last().unwrap().dim(), 0);
    }

    #[test]
    fn truncated_polynomial_hulls_have_the_algebra_dimension() {
        for n in 2..=4 {
            let (a, m) = truncated_polynomial(FieldSpec::prime(5).unwrap(), n);
            let pc = run_hull(&a, &[m], HullOptions::default()).unwrap();
            assert!(pc.stabilized);
            assert_eq!(pc.dim(), n);
            assert_eq!(pc.graded_dims(), vec![1; n + 1][..n].to_vec().into_iter().chain([0]).collect::<Vec<_>>());
        }
    }

    #[test]
    fn semisimple_input_is_rigid() {
        let q = FieldSpec::Rational;
        let a = Algebra::from_fn(q, vec!["a".into(), "b".into()], vec![q.one(), q.one()], |i, j| {
            let mut v = vec![q.zero(); 2];
            if i == j {
                v[i] = q.one();
            }
            v
        });
        let m1 = ModuleRep::one_dim("M1", &[q.one(), q.zero()]);
        let m2 = ModuleRep::one_dim("M2", &[q.zero(), q.one()]);
        let pc = run_hull(&a, &[m1, m2], HullOptions::default()).unwrap();
        assert!(pc.stabilized && pc.relations.is_empty());
        assert_eq!(pc.block_dims(), vec![vec![1, 0], vec![0, 1]]);
    }
}
