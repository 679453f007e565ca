//! Quiver presentations `kQ / (relations)` truncated at a degree cap, with a
//! rewriting system for normal forms.

use std::collections::HashMap;

use super::module::ModuleRep;
use super::quiver::{poly_add_term, poly_endpoints, render_poly, Poly, Quiver, Word};
use super::structure::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar};

const STEP_LIMIT: usize = 200_000;

/// `lead → tail`; every word of `tail` has degree at least `lead.degree()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lead: Word,
    pub tail: Poly,
    pub relation: usize,
}

#[derive(Clone, Debug)]
pub struct MatricPresentation {
    field: FieldSpec,
    quiver: Quiver,
    relations: Vec<Poly>,
    rules: Vec<Rule>,
    degree_cap: usize,
    normal: Vec<Vec<Word>>,
}

/// Default leading word: lowest degree, then smallest in the word order.
pub fn default_lead(p: &Poly) -> Option<Word> {
    p.keys().next().cloned()
}

impl MatricPresentation {
    /// `relations` pairs each polynomial with an optional explicit leading word.
    /// Validates endpoints and orientation, then checks confluence on all overlaps
    /// up to `degree_cap`.
    pub fn new(field: FieldSpec, quiver: Quiver, relations: Vec<(Poly, Option<Word>)>, degree_cap: usize) -> Result<Self> {
        field.validate()?;
        quiver.validate()?;
        let mut rules = Vec::new();
        let mut polys = Vec::new();
        for (idx, (p, lead)) in relations.into_iter().enumerate() {
            if p.is_empty() {
                return Err(Error::Schema(format!("relation {} is zero", idx + 1)));
            }
            poly_endpoints(&p, &quiver)?;
            let lead = match lead {
                Some(w) => w,
                None => default_lead(&p).expect("nonzero"),
            };
            let c = p.get(&lead).ok_or_else(|| {
                Error::Schema(format!("leading word {} is not a term of relation {}", lead.render(&quiver), idx + 1))
            })?;
            if p.keys().any(|w| w.degree() < lead.degree()) {
                return Err(Error::Schema(format!(
                    "relation {} has a term of lower degree than its leading word {}",
                    render_poly(&p, &quiver),
                    lead.render(&quiver)
                )));
            }
            let scale = -c.inv();
            let tail = p.iter().filter(|(w, _)| **w != lead).map(|(w, x)| (w.clone(), x * &scale)).collect();
            rules.push(Rule { lead, tail, relation: idx });
            polys.push(p);
        }
        let mut pres = MatricPresentation { field, quiver, relations: polys, rules, degree_cap, normal: Vec::new() };
        pres.check_confluence()?;
        pres.normal = pres.compute_normal();
        Ok(pres)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    /// Normal monomials of the given degree (idempotents at degree 0).
    pub fn normal_monomials(&self, degree: usize) -> &[Word] {
        self.normal.get(degree).map_or(&[], Vec::as_slice)
    }

    /// All normal monomials up to the cap: idempotents, then by the word order.
    pub fn normal_basis(&self) -> Vec<Word> {
        self.normal.iter().flatten().cloned().collect()
    }

    fn find_rule(&self, w: &Word) -> Option<(usize, &Rule)> {
        for pos in 0..w.arrows.len() {
            for r in &self.rules {
                let n = r.lead.arrows.len();
                if pos + n <= w.arrows.len() && w.arrows[pos..pos + n] == r.lead.arrows[..] {
                    return Some((pos, r));
                }
            }
        }
        None
    }

    fn is_normal(&self, w: &Word) -> bool {
        self.find_rule(w).is_none()
    }

    fn compute_normal(&self) -> Vec<Vec<Word>> {
        let mut out = vec![(0..self.quiver.points).map(Word::empty).collect::<Vec<_>>()];
        let mut layer: Vec<Word> = Vec::new();
        for d in 1..=self.degree_cap {
            // normal words are closed under prefixes, so extend the previous layer
            let mut next = Vec::new();
            if d == 1 {
                for (a, arrow) in self.quiver.arrows.iter().enumerate() {
                    next.push(Word { start: arrow.src, arrows: vec![a] });
                }
            } else {
                for w in &layer {
                    let end = w.end(&self.quiver);
                    for (a, arrow) in self.quiver.arrows.iter().enumerate() {
                        if arrow.src == end {
                            let mut arrows = w.arrows.clone();
                            arrows.push(a);
                            next.push(Word { start: w.start, arrows });
                        }
                    }
                }
            }
            next.retain(|w| self.is_normal(w));
            next.sort();
            out.push(next.clone());
            layer = next;
        }
        out
    }

    fn reduce_unchecked(&self, p: &Poly) -> Result<Poly> {
        let mut work: Poly = p.iter().filter(|(w, _)| w.degree() <= self.degree_cap).map(|(w, c)| (w.clone(), c.clone())).collect();
        let mut out = Poly::new();
        let mut steps = 0usize;
        while let Some((w, c)) = work.pop_first() {
            steps += 1;
            if steps > STEP_LIMIT {
                return Err(Error::NotConfluent(format!("rewriting of {} does not terminate", render_poly(p, &self.quiver))));
            }
            match self.find_rule(&w) {
                None => poly_add_term(&mut out, w, &c),
                Some((pos, r)) => {
                    let prefix = w.subword(0, pos, &self.quiver);
                    let suffix = w.subword(pos + r.lead.degree(), w.degree(), &self.quiver);
                    for (t, x) in &r.tail {
                        let mut arrows = prefix.arrows.clone();
                        arrows.extend_from_slice(&t.arrows);
                        arrows.extend_from_slice(&suffix.arrows);
                        if arrows.len() <= self.degree_cap {
                            poly_add_term(&mut work, Word { start: w.start, arrows }, &(&c * x));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Normal form of a linear combination; words above the cap vanish.
    pub fn reduce(&self, p: &Poly) -> Result<Poly> {
        if let Some(w) = p.keys().find(|w| w.degree() > self.degree_cap) {
            return Err(Error::DegreeCapExceeded { degree: w.degree(), cap: self.degree_cap });
        }
        self.reduce_unchecked(p)
    }

    pub fn normal_form(&self, w: &Word) -> Result<Poly> {
        let mut p = Poly::new();
        p.insert(w.clone(), self.field.one());
        self.reduce(&p)
    }

    fn word_times_poly_times_word(&self, a: &Word, p: &Poly, b: &Word) -> Poly {
        let mut out = Poly::new();
        for (t, x) in p {
            let mut arrows = a.arrows.clone();
            arrows.extend_from_slice(&t.arrows);
            arrows.extend_from_slice(&b.arrows);
            poly_add_term(&mut out, Word { start: a.start, arrows }, x);
        }
        out
    }

    fn check_confluence(&self) -> Result<()> {
        let q = &self.quiver;
        let fail = |w: &Word| Error::NotConfluent(w.render(q));
        for (i, r1) in self.rules.iter().enumerate() {
            let l1 = &r1.lead.arrows;
            for (j, r2) in self.rules.iter().enumerate() {
                let l2 = &r2.lead.arrows;
                // inclusion: l1 = A l2 C
                if i != j && l2.len() <= l1.len() && l1.len() <= self.degree_cap {
                    for pos in 0..=l1.len() - l2.len() {
                        if l1[pos..pos + l2.len()] == l2[..] {
                            let a = r1.lead.subword(0, pos, q);
                            let c = r1.lead.subword(pos + l2.len(), l1.len(), q);
                            let left = self.reduce_unchecked(&r1.tail)?;
                            let right = self.reduce_unchecked(&self.word_times_poly_times_word(&a, &r2.tail, &c))?;
                            if left != right {
                                return Err(fail(&r1.lead));
                            }
                        }
                    }
                }
                // proper overlap: l1 = A B, l2 = B C
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] != l2[..k] || l1.len() + l2.len() - k > self.degree_cap {
                        continue;
                    }
                    let a = r1.lead.subword(0, l1.len() - k, q);
                    let c = r2.lead.subword(k, l2.len(), q);
                    let empty_a = Word::empty(r1.lead.start);
                    let empty_c = Word::empty(c.end(q));
                    let left = self.reduce_unchecked(&self.word_times_poly_times_word(&empty_a, &r1.tail, &c))?;
                    let right = self.reduce_unchecked(&self.word_times_poly_times_word(&a, &r2.tail, &empty_c))?;
                    if left != right {
                        let mut arrows = l1.clone();
                        arrows.extend_from_slice(&l2[k..]);
                        return Err(fail(&Word { start: r1.lead.start, arrows }));
                    }
                }
            }
        }
        Ok(())
    }

    /// The finite-dimensional algebra spanned by the normal monomials up to the cap.
    pub fn truncated_algebra(&self) -> Result<PathAlgebra> {
        let words = self.normal_basis();
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let n = words.len();
        let mut table = Vec::with_capacity(n);
        for a in &words {
            let mut row = Vec::with_capacity(n);
            for b in &words {
                let mut terms = Vec::new();
                if let Some(ab) = a.concat(b, &self.quiver) {
                    if ab.degree() <= self.degree_cap {
                        let mut p = Poly::new();
                        p.insert(ab, self.field.one());
                        for (w, c) in self.reduce_unchecked(&p)? {
                            let k = *index.get(&w).ok_or_else(|| Error::Invariant("normal form outside the basis".into()))?;
                            terms.push((k, c));
                        }
                        terms.sort_by_key(|(k, _)| *k);
                    }
                }
                row.push(terms);
            }
            table.push(row);
        }
        let mut unit = vec![self.field.zero(); n];
        for u in unit.iter_mut().take(self.quiver.points) {
            *u = self.field.one();
        }
        let names = words.iter().map(|w| w.render(&self.quiver)).collect();
        let algebra = Algebra::from_table(self.field, names, unit, table);
        Ok(PathAlgebra { presentation: self.clone(), algebra, words, index })
    }
}

/// A truncated presentation together with its structure-constant algebra.
#[derive(Clone, Debug)]
pub struct PathAlgebra {
    pub presentation: MatricPresentation,
    pub algebra: Algebra,
    pub words: Vec<Word>,
    pub index: HashMap<Word, usize>,
}

impl PathAlgebra {
    pub fn degree(&self, basis_index: usize) -> usize {
        self.words[basis_index].degree()
    }

    /// Basis index of an arrow.
    pub fn arrow_index(&self, arrow: usize) -> usize {
        let q = self.presentation.quiver();
        self.index[&Word { start: q.arrows[arrow].src, arrows: vec![arrow] }]
    }

    /// The one-dimensional simple module at `point`.
    pub fn vertex_module(&self, name: &str, point: usize) -> Result<ModuleRep> {
        if point >= self.presentation.quiver().points {
            return Err(Error::InvalidModule { module: name.into(), reason: format!("no point {}", point + 1) });
        }
        let f = self.algebra.field();
        let values: Vec<Scalar> = self.words.iter().map(|w| if *w == Word::empty(point) { f.one() } else { f.zero() }).collect();
        Ok(ModuleRep::one_dim(name, &values))
    }

    /// Module given by one matrix per idempotent and per arrow; the action of a word is
    /// the product of its arrow matrices. The module must satisfy the relations and be
    /// killed by all paths above the cap.
    pub fn module_from_generators(&self, name: &str, idempotents: &[Matrix], arrows: &[Matrix]) -> Result<ModuleRep> {
        let pres = &self.presentation;
        let q = pres.quiver();
        let err = |reason: String| Error::InvalidModule { module: name.into(), reason };
        if idempotents.len() != q.points || arrows.len() != q.arrows.len() {
            return Err(err("need one matrix per point and per arrow".into()));
        }
        let dim = idempotents[0].rows();
        if idempotents.iter().chain(arrows).any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(err("generator matrices must be square of one size".into()));
        }
        let word_action = |w: &Word| -> Matrix {
            let mut m = idempotents[w.start].clone();
            for &a in &w.arrows {
                m = m.mul(&arrows[a]);
            }
            m
        };
        for (k, rel) in pres.relations().iter().enumerate() {
            let mut total = Matrix::zeros(pres.field(), dim, dim);
            for (w, c) in rel {
                total.add_scaled(c, &word_action(w));
            }
            if !total.is_zero() {
                return Err(err(format!("relation {} does not act as zero", k + 1)));
            }
        }
        for w in q.paths(pres.degree_cap() + 1, false).iter().filter(|w| w.degree() == pres.degree_cap() + 1) {
            if !word_action(w).is_zero() {
                return Err(err(format!("path {} acts nontrivially above the degree cap", w.render(q))));
            }
        }
        let action = self.words.iter().map(word_action).collect();
        Ok(ModuleRep::new(name, dim, action))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quiver::{parse_poly, Arrow};

    fn example_quiver() -> Quiver {
        let arrow = |n: &str, s, d| Arrow { name: n.into(), src: s, dst: d };
        Quiver {
            points: 2,
            arrows: vec![arrow("x", 0, 0), arrow("y", 0, 0), arrow("u", 0, 1), arrow("v", 0, 1), arrow("z", 1, 1)],
        }
    }

    fn example(cap: usize) -> MatricPresentation {
        let q = example_quiver();
        let f = FieldSpec::Rational;
        let rels = vec![
            (parse_poly("y*u - x*v + 2*v*z + u*z^2", &q, f).unwrap(), None),
            (parse_poly("x*y - y*x", &q, f).unwrap(), None),
        ];
        MatricPresentation::new(f, q, rels, cap).unwrap()
    }

    fn word(p: &MatricPresentation, s: &str) -> Word {
        let poly = parse_poly(s, p.quiver(), p.field()).unwrap();
        poly.keys().next().unwrap().clone()
    }

    #[test]
    fn normal_forms_in_the_example() {
        let p = example(4);
        let q = p.quiver();
        assert_eq!(render_poly(&p.normal_form(&Word::empty(1)).unwrap(), q), "e2");
        assert_eq!(render_poly(&p.normal_form(&word(&p, "x*y")).unwrap(), q), "y*x");
        assert_eq!(render_poly(&p.normal_form(&word(&p, "x*v")).unwrap(), q), "y*u + 2*v*z + u*z^2");
        assert_eq!(
            render_poly(&p.normal_form(&word(&p, "x*x*v")).unwrap(), q),
            "y*x*u + 2*y*u*z + 4*v*z^2 + x*u*z^2 + 2*u*z^3"
        );
        assert!(matches!(p.normal_form(&word(&p, "x^5")), Err(Error::DegreeCapExceeded { .. })));
    }

    #[test]
    fn normal_monomial_counts() {
        let p = example(4);
        // 11 paths of degree 2 minus the leads x*y and x*v
        assert_eq!(p.normal_monomials(2).len(), 9);
        assert_eq!(p.normal_monomials(0).len(), 2);
        assert_eq!(p.normal_monomials(1).len(), 5);
    }

    #[test]
    fn non_confluent_system_is_rejected() {
        let q = example_quiver();
        let f = FieldSpec::Rational;
        let rels = vec![
            (parse_poly("x*y - y*x", &q, f).unwrap(), Some(word(&example(4), "y*x"))),
            (parse_poly("y*u - x*v + 2*v*z + u*z^2", &q, f).unwrap(), Some(word(&example(4), "x*v"))),
        ];
        assert!(matches!(MatricPresentation::new(f, q, rels, 4), Err(Error::NotConfluent(_))));
    }

    #[test]
    fn truncated_algebra_is_associative() {
        let p = example(3);
        let pa = p.truncated_algebra().unwrap();
        pa.algebra.validate().unwrap();
        let s1 = pa.vertex_module("M1", 0).unwrap();
        s1.validate(&pa.algebra).unwrap();
        assert_eq!(pa.words[0], Word::empty(0));
        assert_eq!(pa.degree(pa.arrow_index(4)), 1);
    }
}
