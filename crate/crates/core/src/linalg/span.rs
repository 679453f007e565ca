//! Incremental span membership with provenance over sparse vectors.
//!
//! Generators are inserted one at a time. Each accepted generator is kept as a
//! semi-echelon row (pivot = smallest nonzero index, normalized to 1) together
//! with its expression in terms of the original generators. A generator that is
//! already in the span of earlier ones is recorded but contributes no row, so
//! expressions always use the earliest possible generators.

use std::collections::BTreeMap;

use super::field::{FieldSpec, Scalar};

pub type SparseVec = BTreeMap<usize, Scalar>;

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    combo: SparseVec,
}

#[derive(Clone, Debug)]
pub struct SpanSolver {
    field: FieldSpec,
    rows: BTreeMap<usize, Row>,
    generators: usize,
}

/// Result of expressing a vector against the generators.
#[derive(Clone, Debug)]
pub struct Expression {
    /// Coefficient of each generator that was used (absent = 0).
    pub coefficients: SparseVec,
    /// What is left after reduction; empty iff the vector is in the span.
    pub residual: SparseVec,
}

impl Expression {
    pub fn in_span(&self) -> bool {
        self.residual.is_empty()
    }
}

impl SpanSolver {
    pub fn new(field: FieldSpec) -> Self {
        SpanSolver { field, rows: BTreeMap::new(), generators: 0 }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &SparseVec) -> Expression {
        let mut residual = v.clone();
        residual.retain(|_, x| !x.is_zero());
        let mut coefficients = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = residual.range(cursor..).map(|(&k, _)| k).find(|k| self.rows.contains_key(k));
            let Some(p) = next else { break };
            let f = residual.remove(&p).expect("present");
            let row = &self.rows[&p];
            for (&k, x) in row.vec.range(p + 1..) {
                add_to(&mut residual, k, &-(&f * x));
            }
            for (&g, x) in &row.combo {
                add_to(&mut coefficients, g, &(&f * x));
            }
            cursor = p + 1;
        }
        Expression { coefficients, residual }
    }

    /// Inserts a generator; returns its index and whether it enlarged the span.
    pub fn push(&mut self, v: &SparseVec) -> (usize, bool) {
        let idx = self.generators;
        self.generators += 1;
        let e = self.reduce(v);
        let Some((&p, lead)) = e.residual.iter().next() else {
            return (idx, false);
        };
        let inv = lead.inv();
        // residual = v - Σ coeff_g g  ⇒ row = (v - Σ coeff_g g) / lead
        let mut combo: SparseVec = e.coefficients.iter().map(|(&g, x)| (g, -(x * &inv))).collect();
        combo.insert(idx, inv.clone());
        combo.retain(|_, x| !x.is_zero());
        let vec = e.residual.iter().map(|(&k, x)| (k, x * &inv)).collect();
        self.rows.insert(p, Row { vec, combo });
        (idx, true)
    }

    pub fn express(&self, v: &SparseVec) -> Expression {
        self.reduce(v)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
}

pub(crate) fn add_to(v: &mut SparseVec, k: usize, x: &Scalar) {
    if x.is_zero() {
        return;
    }
    match v.get_mut(&k) {
        Some(y) => {
            *y += x;
            if y.is_zero() {
                v.remove(&k);
            }
        }
        None => {
            v.insert(k, x.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(f: FieldSpec, xs: &[(usize, i64)]) -> SparseVec {
        xs.iter().map(|&(k, x)| (k, f.from_i64(x))).filter(|(_, x)| !x.is_zero()).collect()
    }

    #[test]
    fn expresses_with_earliest_generators() {
        let q = FieldSpec::Rational;
        let mut s = SpanSolver::new(q);
        assert_eq!(s.push(&sv(q, &[(0, 1), (1, 1)])), (0, true));
        assert_eq!(s.push(&sv(q, &[(1, 2)])), (1, true));
        // dependent: g0 + g1/2 ... = (1, 2)
        assert_eq!(s.push(&sv(q, &[(0, 1), (1, 2)])), (2, false));
        let e = s.express(&sv(q, &[(0, 2), (1, 5)]));
        assert!(e.in_span());
        assert_eq!(e.coefficients.get(&0), Some(&q.from_i64(2)));
        assert_eq!(e.coefficients.get(&1).map(|x| x.to_string()), Some("3/2".into()));
        assert!(!e.coefficients.contains_key(&2));
        let e = s.express(&sv(q, &[(2, 1)]));
        assert!(!e.in_span());
    }
}
