//! Quivers, paths and noncommutative polynomials in arrows.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// Points `0..points` and arrows between them. Paths are read left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub points: usize,
    pub arrows: Vec<Arrow>,
}

/// A path: a start point plus a sequence of composable arrows. The empty path at
/// `start` is the idempotent `e_start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Ord for Word {
    /// Degree first, then lexicographic on arrow indices, then start point.
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.start.cmp(&other.start))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn empty(point: usize) -> Self {
        Word { start: point, arrows: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.arrows.len()
    }

    pub fn end(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.start, |&a| q.arrows[a].dst)
    }

    /// Concatenation, or `None` if the endpoints do not match.
    pub fn concat(&self, other: &Word, q: &Quiver) -> Option<Word> {
        if self.end(q) != other.start {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Word { start: self.start, arrows })
    }

    pub fn subword(&self, from: usize, to: usize, q: &Quiver) -> Word {
        let start = if from == 0 { self.start } else { q.arrows[self.arrows[from - 1]].dst };
        Word { start, arrows: self.arrows[from..to].to_vec() }
    }

    /// Renders `x*y^2*u`; empty words render as `e<point+1>`.
    pub fn render(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            return format!("e{}", self.start + 1);
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.arrows.len() {
            let a = self.arrows[i];
            let mut run = 1;
            while i + run < self.arrows.len() && self.arrows[i + run] == a {
                run += 1;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&q.arrows[a].name);
            if run > 1 {
                let _ = write!(out, "^{run}");
            }
            i += run;
        }
        out
    }
}

impl Quiver {
    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// All paths of degree `1..=max_degree`, sorted by the word order, plus the
    /// idempotents first when `with_idempotents` is set.
    pub fn paths(&self, max_degree: usize, with_idempotents: bool) -> Vec<Word> {
        let mut out = Vec::new();
        if with_idempotents {
            out.extend((0..self.points).map(Word::empty));
        }
        let mut layer: Vec<Word> =
            (0..self.arrows.len()).map(|a| Word { start: self.arrows[a].src, arrows: vec![a] }).collect();
        for _ in 0..max_degree {
            layer.sort();
            out.extend(layer.iter().cloned());
            let mut next = Vec::new();
            for w in &layer {
                let end = w.end(self);
                for (a, arrow) in self.arrows.iter().enumerate() {
                    if arrow.src == end {
                        let mut arrows = w.arrows.clone();
                        arrows.push(a);
                        next.push(Word { start: w.start, arrows });
                    }
                }
            }
            layer = next;
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.arrows {
            if a.src >= self.points || a.dst >= self.points {
                return Err(Error::Schema(format!("arrow {} has an endpoint out of range", a.name)));
            }
            if a.name.is_empty() || !a.name.chars().next().unwrap().is_alphabetic() {
                return Err(Error::Schema(format!("bad arrow name {:?}", a.name)));
            }
        }
        for (i, a) in self.arrows.iter().enumerate() {
            if self.arrows[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::Schema(format!("duplicate arrow name {}", a.name)));
            }
        }
        Ok(())
    }
}

/// A finite linear combination of paths.
pub type Poly = BTreeMap<Word, Scalar>;

pub fn poly_add_term(p: &mut Poly, w: Word, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(&w) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                p.remove(&w);
            }
        }
        None => {
            p.insert(w, c.clone());
        }
    }
}

/// Renders terms in ascending word order: `t11_1*t12_2 - 2*t12_2*t22`.
pub fn render_poly(p: &Poly, q: &Quiver) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (w, c)) in p.iter().enumerate() {
        let neg = c.is_negative();
        let mag = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(&w.render(q));
        } else {
            let _ = write!(out, "{mag}*{}", w.render(q));
        }
    }
    out
}

/// Parses `y*u - x*v + 2*v*z + u*z^2` against the arrows of `q`.
pub fn parse_poly(s: &str, q: &Quiver, field: FieldSpec) -> Result<Poly> {
    let mut poly = Poly::new();
    let bad = |msg: &str| Error::Parse(format!("{msg} in polynomial {s:?}"));
    let mut rest = s.trim();
    if rest.is_empty() {
        return Err(bad("empty input"));
    }
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        } else if !first {
            return Err(bad("expected + or -"));
        }
        first = false;
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = rest[..end].trim();
        rest = rest[end..].trim_start();
        if term.is_empty() {
            return Err(bad("empty term"));
        }
        let mut coef = field.from_i64(sign);
        let mut arrows = Vec::new();
        for factor in term.split('*').map(str::trim) {
            if factor.is_empty() {
                return Err(bad("empty factor"));
            }
            if factor.chars().next().unwrap().is_ascii_digit() {
                coef = coef * field.parse(factor)?;
                continue;
            }
            let (name, pow) = match factor.split_once('^') {
                Some((n, e)) => (n.trim(), e.trim().parse::<usize>().map_err(|_| bad("bad exponent"))?),
                None => (factor, 1),
            };
            let a = q.arrow_index(name).ok_or_else(|| bad(&format!("unknown arrow {name}")))?;
            arrows.extend(std::iter::repeat(a).take(pow));
        }
        if arrows.is_empty() {
            return Err(bad("constant term"));
        }
        for win in arrows.windows(2) {
            if q.arrows[win[0]].dst != q.arrows[win[1]].src {
                return Err(Error::EndpointMismatch(format!("term {term:?} is not a path")));
            }
        }
        let w = Word { start: q.arrows[arrows[0]].src, arrows };
        poly_add_term(&mut poly, w, &coef);
    }
    Ok(poly)
}

/// Common `(start, end)` of all terms.
pub fn poly_endpoints(p: &Poly, q: &Quiver) -> Result<Option<(usize, usize)>> {
    let mut ends = None;
    for w in p.keys() {
        let e = (w.start, w.end(q));
        match ends {
            None => ends = Some(e),
            Some(prev) if prev != e => {
                return Err(Error::EndpointMismatch(render_poly(p, q)));
            }
            _ => {}
        }
    }
    Ok(ends)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example_quiver() -> Quiver {
        let arrow = |n: &str, s, d| Arrow { name: n.into(), src: s, dst: d };
        Quiver {
            points: 2,
            arrows: vec![arrow("x", 0, 0), arrow("y", 0, 0), arrow("u", 0, 1), arrow("v", 0, 1), arrow("z", 1, 1)],
        }
    }

    #[test]
    fn parse_and_render_round_trip() {
        let q = example_quiver();
        let f = parse_poly("y*u - x*v + 2*v*z + u*z^2", &q, FieldSpec::Rational).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(render_poly(&f, &q), "-x*v + y*u + 2*v*z + u*z^2");
        assert_eq!(poly_endpoints(&f, &q).unwrap(), Some((0, 1)));
        assert!(parse_poly("u*x", &q, FieldSpec::Rational).is_err());
        let mixed = parse_poly("x + u", &q, FieldSpec::Rational).unwrap();
        assert!(matches!(poly_endpoints(&mixed, &q), Err(Error::EndpointMismatch(_))));
        assert!(parse_poly("x*w", &q, FieldSpec::Rational).is_err());
    }

    #[test]
    fn paths_are_sorted_and_composable() {
        let q = example_quiver();
        let ps = q.paths(2, true);
        assert_eq!(ps[0], Word::empty(0));
        assert_eq!(ps[1], Word::empty(1));
        // degree 1: 5 arrows; degree 2: xx xy xu xv yx yy yu yv uz vz zz
        assert_eq!(ps.len(), 2 + 5 + 11);
        assert!(ps[2..].windows(2).all(|w| w[0] < w[1]));
    }
}
