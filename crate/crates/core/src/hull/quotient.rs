use std::collections::HashMap;

use crate::algebra::quiver::{poly_add_term, Poly, Quiver, Word};
use crate::linalg::{FieldSpec, Matrix};

/// `T_{≤top} / (relations)`: the free path algebra truncated at `top`, modulo the span of
/// all `u·f·v` (truncated). Normal words are the non-pivot columns of the RREF with columns
/// in the word order, so each relation is led by its smallest word.
#[derive(Clone, Debug)]
pub struct TruncatedQuotient {
    top: usize,
    points: usize,
    normal: Vec<Word>,
    reductions: HashMap<Word, Poly>,
}

impl TruncatedQuotient {
    pub fn new(field: FieldSpec, quiver: &Quiver, relations: &[Poly], top: usize) -> Self {
        let paths = quiver.paths(top, false);
        let col: HashMap<&Word, usize> = paths.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut rows: Vec<Vec<crate::linalg::Scalar>> = Vec::new();
        let mut by_end: HashMap<usize, Vec<Word>> = HashMap::new();
        let mut by_start: HashMap<usize, Vec<Word>> = HashMap::new();
        for p in 0..quiver.points {
            by_end.entry(p).or_default().push(Word::empty(p));
            by_start.entry(p).or_default().push(Word::empty(p));
        }
        for w in &paths {
            by_end.entry(w.end(quiver)).or_default().push(w.clone());
            by_start.entry(w.start).or_default().push(w.clone());
        }
        for f in relations {
            let Some((lead, _)) = f.iter().next() else { continue };
            let low = lead.degree();
            if low > top {
                continue;
            }
            let (s, e) = (lead.start, lead.end(quiver));
            for u in by_end.get(&s).into_iter().flatten().filter(|u| u.degree() + low <= top) {
                for v in by_start.get(&e).into_iter().flatten().filter(|v| u.degree() + v.degree() + low <= top) {
                    let mut row = vec![field.zero(); paths.len()];
                    let mut any = false;
                    for (t, c) in f {
                        let d = u.degree() + t.degree() + v.degree();
                        if d > top {
                            continue;
                        }
                        let mut arrows = u.arrows.clone();
                        arrows.extend_from_slice(&t.arrows);
                        arrows.extend_from_slice(&v.arrows);
                        let w = Word { start: u.start, arrows };
                        row[col[&w]] += c;
                        any = true;
                    }
                    if any {
                        rows.push(row);
                    }
                }
            }
        }
        let mut reductions = HashMap::new();
        let mut is_pivot = vec![false; paths.len()];
        if !rows.is_empty() {
            let (r, pivots) = Matrix::from_rows(field, rows).rref();
            for (k, &p) in pivots.iter().enumerate() {
                is_pivot[p] = true;
                let mut nf = Poly::new();
                for (c, x) in r.row(k).iter().enumerate().skip(p + 1) {
                    poly_add_term(&mut nf, paths[c].clone(), &-x);
                }
                reductions.insert(paths[p].clone(), nf);
            }
        }
        let mut normal: Vec<Word> = (0..quiver.points).map(Word::empty).collect();
        normal.extend(paths.iter().zip(&is_pivot).filter(|(_, p)| !**p).map(|(w, _)| w.clone()));
        TruncatedQuotient { top, points: quiver.points, normal, reductions }
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Normal words (idempotents first), in the word order.
    pub fn normal(&self) -> &[Word] {
        &self.normal
    }

    pub fn normal_of_degree(&self, d: usize) -> impl Iterator<Item = &Word> {
        self.normal.iter().filter(move |w| w.degree() == d)
    }

    /// Normal form of a single path; zero above `top`.
    pub fn nf(&self, w: &Word, field: FieldSpec) -> Poly {
        if w.degree() > self.top {
            return Poly::new();
        }
        if let Some(p) = self.reductions.get(w) {
            return p.clone();
        }
        let mut p = Poly::new();
        p.insert(w.clone(), field.one());
        p
    }

    /// Counts of normal words by `(degree, start, end)`.
    pub fn graded_dims(&self, quiver: &Quiver) -> Vec<Vec<Vec<usize>>> {
        let mut out = vec![vec![vec![0; self.points]; self.points]; self.top + 1];
        for w in &self.normal {
            out[w.degree()][w.start][w.end(quiver)] += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quiver::{parse_poly, Arrow};

    #[test]
    fn one_loop_truncated_power() {
        let q = Quiver { points: 1, arrows: vec![Arrow { name: "t".into(), src: 0, dst: 0 }] };
        let f = FieldSpec::Rational;
        let rel = parse_poly("t^3", &q, f).unwrap();
        let tq = TruncatedQuotient::new(f, &q, &[rel], 4);
        assert_eq!(tq.normal().len(), 3);
        let t2 = parse_poly("t^2", &q, f).unwrap();
        let w = t2.keys().next().unwrap();
        assert_eq!(tq.nf(w, f), t2);
    }

    #[test]
    fn commutator_leads_with_smallest_word() {
        let a = |n: &str| Arrow { name: n.into(), src: 0, dst: 0 };
        let q = Quiver { points: 1, arrows: vec![a("a"), a("b")] };
        let f = FieldSpec::Rational;
        let rel = parse_poly("a*b - b*a", &q, f).unwrap();
        let tq = TruncatedQuotient::new(f, &q, &[rel], 3);
        // commutative polynomials in two variables: 1, 2, 3, 4 monomials per degree
        let dims: Vec<usize> = tq.graded_dims(&q).iter().map(|d| d[0][0]).collect();
        assert_eq!(dims, vec![1, 2, 3, 4]);
        let ab = parse_poly("a*b", &q, f).unwrap();
        assert_eq!(tq.nf(ab.keys().next().unwrap(), f), parse_poly("b*a", &q, f).unwrap());
    }
}
