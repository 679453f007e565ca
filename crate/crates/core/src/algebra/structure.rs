use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar, Subspace};

/// A sparse algebra element or structure-constant row: `(basis index, coefficient)`.
pub type Terms = Vec<(usize, Scalar)>;

/// Finite-dimensional associative algebra given by structure constants
/// `b_i · b_j = Σ_k c[i][j][k] b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: FieldSpec,
    names: Vec<String>,
    unit: Vec<Scalar>,
    table: Vec<Vec<Terms>>,
}

impl Algebra {
    /// Builds from a dense product function; no validation is performed.
    pub fn from_fn(
        field: FieldSpec,
        names: Vec<String>,
        unit: Vec<Scalar>,
        mut product: impl FnMut(usize, usize) -> Vec<Scalar>,
    ) -> Self {
        let n = names.len();
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = product(i, j);
                        assert_eq!(v.len(), n);
                        v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
                    })
                    .collect()
            })
            .collect();
        Algebra { field, names, unit, table }
    }

    pub fn from_table(field: FieldSpec, names: Vec<String>, unit: Vec<Scalar>, table: Vec<Vec<Terms>>) -> Self {
        Algebra { field, names, unit, table }
    }

    /// `k[x]/(p(x))` with basis `1, x, …, x^{n-1}`; `modulus` lists the coefficients
    /// `c_0..c_n` of a monic polynomial.
    pub fn polynomial_quotient(field: FieldSpec, modulus: &[Scalar]) -> Result<Self> {
        let n = modulus.len().checked_sub(1).filter(|&n| n > 0).ok_or_else(|| {
            Error::Schema("modulus must have degree at least 1".into())
        })?;
        if !modulus[n].is_one() {
            return Err(Error::Schema("modulus must be monic".into()));
        }
        let names = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        // x^m reduced mod p for m < 2n - 1
        let mut powers: Vec<Vec<Scalar>> = Vec::new();
        for m in 0..(2 * n).max(1) {
            let v = if m < n {
                let mut v = vec![field.zero(); n];
                v[m] = field.one();
                v
            } else {
                let prev = &powers[m - 1];
                let mut v = vec![field.zero(); n];
                v[1..n].clone_from_slice(&prev[..n - 1]);
                let top = prev[n - 1].clone();
                for (k, c) in modulus[..n].iter().enumerate() {
                    v[k] -= &(&top * c);
                }
                v
            };
            powers.push(v);
        }
        let mut unit = vec![field.zero(); n];
        unit[0] = field.one();
        Ok(Self::from_fn(field, names, unit, |i, j| powers[i + j].clone()))
    }

    /// The subalgebra of square matrices spanned by `mats` (which must be linearly
    /// independent, closed under products and contain the identity in their span).
    pub fn from_matrix_span(field: FieldSpec, names: Vec<String>, mats: &[Matrix]) -> Result<Self> {
        if mats.is_empty() || mats.len() != names.len() {
            return Err(Error::Schema("matrix span needs one name per matrix".into()));
        }
        let n = mats[0].rows();
        if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::Shape("matrix span basis must be square of one size".into()));
        }
        let flat: Vec<Vec<Scalar>> = mats.iter().map(|m| m.entries().to_vec()).collect();
        let span_mat = Matrix::from_rows(field, flat).transpose();
        if span_mat.rank() != mats.len() {
            return Err(Error::Schema("matrix span basis is linearly dependent".into()));
        }
        let coords = |m: &Matrix| -> Result<Vec<Scalar>> {
            let b = Matrix::from_rows(field, m.entries().iter().map(|x| vec![x.clone()]).collect());
            let x = span_mat
                .solve(&b)
                .ok_or_else(|| Error::Schema("matrix span is not closed under products".into()))?;
            Ok((0..mats.len()).map(|i| x[(i, 0)].clone()).collect())
        };
        let unit = coords(&Matrix::identity(field, n))
            .map_err(|_| Error::Schema("matrix span does not contain the identity".into()))?;
        let mut table = Vec::new();
        for a in mats {
            let mut row = Vec::new();
            for b in mats {
                let c = coords(&a.mul(b))?;
                row.push(c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect());
            }
            table.push(row);
        }
        Ok(Algebra { field, names, unit, table })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// Structure-constant row of `b_i · b_j`.
    pub fn product(&self, i: usize, j: usize) -> &Terms {
        &self.table[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    /// Product of two dense elements.
    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }

    /// Checks associativity on all basis triples and the unit laws.
    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        let n = self.dim();
        if self.unit.len() != n || self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("structure constants do not match the basis size".into()));
        }
        for i in 0..n {
            let bi = self.basis_vector(i);
            if self.mul(&self.unit, &bi) != bi || self.mul(&bi, &self.unit) != bi {
                return Err(Error::BadUnit);
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.dense(&self.table[i][j]);
                for k in 0..n {
                    let bk = self.basis_vector(k);
                    let left = self.mul(&ij, &bk);
                    let jk = self.dense(&self.table[j][k]);
                    let right = self.mul(&self.basis_vector(i), &jk);
                    if left != right {
                        return Err(Error::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dense(&self, t: &Terms) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        for (k, c) in t {
            v[*k] += c;
        }
        v
    }

    /// Replaces one structure constant; used to build perturbed tables in tests.
    pub fn with_constant(&self, i: usize, j: usize, k: usize, c: Scalar) -> Algebra {
        let mut out = self.clone();
        let mut v = self.dense(&self.table[i][j]);
        v[k] = c;
        out.table[i][j] = v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        out
    }

    /// The same algebra with its basis reordered: new basis element `i` is old `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Algebra {
        let n = self.dim();
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let names = perm.iter().map(|&o| self.names[o].clone()).collect();
        let unit = perm.iter().map(|&o| self.unit[o].clone()).collect();
        let table = perm
            .iter()
            .map(|&oi| {
                perm.iter()
                    .map(|&oj| {
                        let mut t: Terms = self.table[oi][oj].iter().map(|(k, c)| (inv[*k], c.clone())).collect();
                        t.sort_by_key(|(k, _)| *k);
                        t
                    })
                    .collect()
            })
            .collect();
        Algebra { field: self.field, names, unit, table }
    }

    /// Span of all products `x·y` with `x ∈ left`, `y ∈ right`.
    pub fn product_space(&self, left: &Subspace, right: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for x in left.basis() {
            for y in right.basis() {
                vs.push(self.mul(x, y));
            }
        }
        Subspace::from_vectors(self.field, self.dim(), vs)
    }

    /// Whether `sub` is closed under left and right multiplication by every basis element.
    pub fn is_two_sided_ideal(&self, sub: &Subspace) -> bool {
        (0..self.dim()).all(|b| {
            let bv = self.basis_vector(b);
            sub.basis().iter().all(|x| sub.contains(&self.mul(x, &bv)) && sub.contains(&self.mul(&bv, x)))
        })
    }

    /// Element as `Σ c_k b_k` using basis names.
    pub fn render(&self, v: &[Scalar]) -> String {
        let mut out = String::new();
        for (k, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            if c.is_one() {
                out.push_str(&self.names[k]);
            } else {
                out.push_str(&format!("({c})*{}", self.names[k]));
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3(p: u64) -> Algebra {
        let f = FieldSpec::prime(p).unwrap();
        let m = [f.from_i64(-1), f.zero(), f.zero(), f.one()];
        Algebra::polynomial_quotient(f, &m).unwrap()
    }

    #[test]
    fn coordinatewise_product_is_valid() {
        let q = FieldSpec::Rational;
        let names = vec!["a".into(), "b".into(), "c".into()];
        let alg = Algebra::from_fn(q, names, vec![q.one(), q.one(), q.one()], |i, j| {
            let mut v = vec![q.zero(); 3];
            if i == j {
                v[i] = q.one();
            }
            v
        });
        assert!(alg.validate().is_ok());
        let broken = alg.with_constant(0, 1, 2, q.one());
        assert!(matches!(broken.validate(), Err(Error::NotAssociative(..)) | Err(Error::BadUnit)));
    }

    #[test]
    fn group_algebra_of_z3_mod_3() {
        let a = z3(3);
        assert!(a.validate().is_ok());
        assert_eq!(a.dim(), 3);
        // x · x^2 = 1
        assert_eq!(a.product(1, 2), &vec![(0, a.field().one())]);
    }

    #[test]
    fn perturbed_table_is_not_associative() {
        let a = z3(3);
        let broken = a.with_constant(1, 1, 0, a.field().one());
        assert!(broken.validate().is_err());
    }

    #[test]
    fn upper_triangular_from_matrices() {
        let q = FieldSpec::Rational;
        let mats = [
            Matrix::from_i64(q, &[&[1, 0], &[0, 0]]),
            Matrix::from_i64(q, &[&[0, 1], &[0, 0]]),
            Matrix::from_i64(q, &[&[0, 0], &[0, 1]]),
        ];
        let a = Algebra::from_matrix_span(q, vec!["e11".into(), "e12".into(), "e22".into()], &mats).unwrap();
        assert!(a.validate().is_ok());
        assert_eq!(a.unit(), &[q.one(), q.zero(), q.one()]);
        assert_eq!(a.product(0, 1), &vec![(1, q.one())]);
        assert!(a.product(1, 0).is_empty());
    }
}
