use serde::Serialize;

use super::module::ModuleRep;
use super::structure::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar, Subspace};

/// Matrix whose row `k` is the concatenation of `ρ_i(b_k)` over the family.
fn family_action_rows(alg: &Algebra, family: &[ModuleRep]) -> Matrix {
    let rows = (0..alg.dim())
        .map(|k| family.iter().flat_map(|m| m.act(k).entries().iter().cloned()).collect::<Vec<_>>())
        .collect::<Vec<_>>();
    if rows.first().is_some_and(Vec::is_empty) {
        return Matrix::zeros(alg.field(), alg.dim(), 0);
    }
    Matrix::from_rows(alg.field(), rows)
}

/// `ker(⊕ ρ_i)` as a subspace of `A`, without the nilpotency check.
pub fn family_kernel(alg: &Algebra, family: &[ModuleRep]) -> Subspace {
    let rows = family_action_rows(alg, family);
    if rows.cols() == 0 {
        return Subspace::full(alg.field(), alg.dim());
    }
    rows.transpose().kernel()
}

/// Dimension of `ρ(A)` inside `⊕ End_k(M_i)`.
pub fn family_image_dim(alg: &Algebra, family: &[ModuleRep]) -> usize {
    let rows = family_action_rows(alg, family);
    if rows.cols() == 0 {
        0
    } else {
        rows.rank()
    }
}

/// Nilpotency index of an ideal (smallest `n` with `I^n = 0`), or `None`.
pub fn nilpotency_index(alg: &Algebra, ideal: &Subspace) -> Option<usize> {
    let mut power = ideal.clone();
    let mut n = 1;
    loop {
        if power.dim() == 0 {
            return Some(n);
        }
        let next = alg.product_space(&power, ideal);
        if next.dim() == power.dim() {
            return None;
        }
        power = next;
        n += 1;
    }
}

/// The Jacobson radical, computed as the kernel of the action on the declared complete
/// family of simple modules. Fails with `NotNilpotent` when that kernel is not nilpotent.
pub fn radical(alg: &Algebra, family: &[ModuleRep]) -> Result<Subspace> {
    let k = family_kernel(alg, family);
    match nilpotency_index(alg, &k) {
        Some(_) => Ok(k),
        None => Err(Error::NotNilpotent),
    }
}

/// Basis of `End_A(M)` as `dim × dim` matrices, in RREF order of their entries.
pub fn endomorphisms(alg: &Algebra, m: &ModuleRep) -> Vec<Matrix> {
    let d = m.dim();
    let field = alg.field();
    // unknown φ (d×d) flattened row-major; equations ρ(b)φ - φρ(b) = 0
    let mut eqs: Vec<Vec<Scalar>> = Vec::new();
    for k in 0..alg.dim() {
        let r = m.act(k);
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![field.zero(); d * d];
                for l in 0..d {
                    // (ρφ)_ij = Σ_l ρ_il φ_lj
                    row[l * d + j] += &r[(i, l)];
                    // (φρ)_ij = Σ_l φ_il ρ_lj
                    row[i * d + l] -= &r[(l, j)];
                }
                if row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
    }
    let sols = if eqs.is_empty() {
        Subspace::full(field, d * d)
    } else {
        Matrix::from_rows(field, eqs).kernel()
    };
    sols.basis()
        .iter()
        .map(|v| Matrix::from_rows(field, v.chunks(d).map(<[Scalar]>::to_vec).collect()))
        .collect()
}

/// `End_A(M)` as an algebra, with product `φ·ψ` = matrix product (apply `φ` first).
pub fn end_algebra(alg: &Algebra, m: &ModuleRep) -> Algebra {
    let basis = endomorphisms(alg, m);
    let field = alg.field();
    let span = Subspace::from_vectors(field, m.dim() * m.dim(), basis.iter().map(|b| b.entries().to_vec()).collect());
    // basis is already in RREF, so coordinates are read at the pivots
    let coords = |x: &Matrix| span.coordinates(x.entries()).expect("End_A(M) is closed under composition");
    let names = (0..basis.len()).map(|i| format!("phi{i}")).collect();
    let unit = coords(&Matrix::identity(field, m.dim()));
    Algebra::from_fn(field, names, unit, |i, j| coords(&basis[i].mul(&basis[j])))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// `dim ρ(A) = (dim M)²`: simple with `End_A(M) = k`.
    SplitSimple,
    /// Every test vector generates the whole module, but `End_A(M)` is bigger than `k`.
    SpinChecked,
    /// A test vector generated a proper nonzero submodule.
    Reducible {
        #[serde(skip)]
        witness: Subspace,
        witness_dim: usize,
    },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicityCertificate {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub end_dim: usize,
    pub image_dim: usize,
}

/// Submodule generated by `v`.
pub fn spin(alg: &Algebra, m: &ModuleRep, v: &[Scalar]) -> Subspace {
    let vs = (0..alg.dim()).map(|k| m.act(k).vec_mul(v)).collect();
    Subspace::from_vectors(alg.field(), m.dim(), vs)
}

pub fn simplicity_certificate(alg: &Algebra, m: &ModuleRep) -> SimplicityCertificate {
    let d = m.dim();
    let image_dim = family_image_dim(alg, std::slice::from_ref(m));
    let end_dim = endomorphisms(alg, m).len();
    if image_dim == d * d {
        debug_assert_eq!(end_dim, 1, "density forces End = k");
        return SimplicityCertificate { verdict: Verdict::SplitSimple, end_dim, image_dim };
    }
    let field = alg.field();
    let unit = |i: usize| {
        let mut v = vec![field.zero(); d];
        v[i] = field.one();
        v
    };
    let mut tests: Vec<Vec<Scalar>> = (0..d).map(unit).collect();
    for i in 0..d {
        for j in i + 1..d {
            tests.push(unit(i).iter().zip(unit(j)).map(|(a, b)| a + &b).collect());
        }
    }
    for v in &tests {
        let s = spin(alg, m, v);
        if s.dim() > 0 && s.dim() < d {
            let witness_dim = s.dim();
            return SimplicityCertificate {
                verdict: Verdict::Reducible { witness: s, witness_dim },
                end_dim,
                image_dim,
            };
        }
    }
    let verdict = if end_dim > 1 { Verdict::SpinChecked } else { Verdict::Inconclusive };
    SimplicityCertificate { verdict, end_dim, image_dim }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;

    fn z3(field: FieldSpec) -> Algebra {
        let m = [field.from_i64(-1), field.zero(), field.zero(), field.one()];
        Algebra::polynomial_quotient(field, &m).unwrap()
    }

    /// Action of `x^k` by the k-th power of `x_mat`.
    fn cyclic_module(name: &str, x_mat: Matrix, n: usize) -> ModuleRep {
        let field = x_mat.field();
        let mut pows = vec![Matrix::identity(field, x_mat.rows())];
        for i in 1..n {
            pows.push(pows[i - 1].mul(&x_mat));
        }
        ModuleRep::new(name, x_mat.rows(), pows)
    }

    #[test]
    fn radical_of_semisimple_and_modular_group_algebras() {
        let q = FieldSpec::Rational;
        let a = z3(q);
        let m = cyclic_module("M", Matrix::from_i64(q, &[&[1]]), 3);
        let n = cyclic_module("N", Matrix::from_i64(q, &[&[0, 1], &[-1, -1]]), 3);
        m.validate(&a).unwrap();
        n.validate(&a).unwrap();
        assert_eq!(radical(&a, &[m.clone(), n.clone()]).unwrap().dim(), 0);

        let f3 = FieldSpec::prime(3).unwrap();
        let a3 = z3(f3);
        let m0 = cyclic_module("M0", Matrix::from_i64(f3, &[&[1]]), 3);
        let j = radical(&a3, &[m0]).unwrap();
        assert_eq!(j.dim(), 2);
        // oracle: x - 1 and (x - 1)^2 = x^2 - 2x + 1
        let xm1 = vec![f3.from_i64(-1), f3.one(), f3.zero()];
        let xm1_sq = vec![f3.one(), f3.from_i64(-2), f3.one()];
        assert!(j.contains(&xm1) && j.contains(&xm1_sq));
        assert!(a3.is_two_sided_ideal(&j));
        assert_eq!(nilpotency_index(&a3, &j), Some(3));
    }

    #[test]
    fn incomplete_family_is_not_nilpotent() {
        let q = FieldSpec::Rational;
        let a = z3(q);
        let m = cyclic_module("M", Matrix::from_i64(q, &[&[1]]), 3);
        assert!(matches!(radical(&a, &[m]), Err(Error::NotNilpotent)));
    }

    #[test]
    fn endomorphism_dimensions() {
        let q = FieldSpec::Rational;
        let a = z3(q);
        let m = cyclic_module("M", Matrix::from_i64(q, &[&[1]]), 3);
        let n = cyclic_module("N", Matrix::from_i64(q, &[&[0, 1], &[-1, -1]]), 3);
        assert_eq!(end_algebra(&a, &m).dim(), 1);
        let end_n = end_algebra(&a, &n);
        assert_eq!(end_n.dim(), 2);
        end_n.validate().unwrap();
        let mm = m.direct_sum(&m);
        assert_eq!(end_algebra(&a, &mm).dim(), 4);
        // commutes with the action
        for phi in endomorphisms(&a, &n) {
            for k in 0..3 {
                assert_eq!(n.act(k).mul(&phi), phi.mul(n.act(k)));
            }
        }
    }

    #[test]
    fn certificates() {
        let f3 = FieldSpec::prime(3).unwrap();
        let a3 = z3(f3);
        let m0 = cyclic_module("M0", Matrix::from_i64(f3, &[&[1]]), 3);
        assert_eq!(simplicity_certificate(&a3, &m0).verdict, Verdict::SplitSimple);

        let q = FieldSpec::Rational;
        let n = cyclic_module("N", Matrix::from_i64(q, &[&[0, 1], &[-1, -1]]), 3);
        let c = simplicity_certificate(&z3(q), &n);
        assert_eq!(c.verdict, Verdict::SpinChecked);
        assert_eq!(c.end_dim, 2);

        // regular module of k[x]/(x^2): witness is the span of x
        let dual = Algebra::polynomial_quotient(q, &[q.zero(), q.zero(), q.one()]).unwrap();
        let reg = ModuleRep::regular(&dual);
        reg.validate(&dual).unwrap();
        let c = simplicity_certificate(&dual, &reg);
        match c.verdict {
            Verdict::Reducible { witness, .. } => {
                assert_eq!(witness, Subspace::from_vectors(q, 2, vec![vec![q.zero(), q.one()]]));
            }
            other => panic!("expected reducible, got {other:?}"),
        }
    }
}
