use super::field::{FieldSpec, Scalar};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// A subspace of `k^n`, stored as the nonzero rows of its reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    field: FieldSpec,
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace { field, ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        Matrix::identity(field, ambient_dim).row_space()
    }

    pub fn from_vectors(field: FieldSpec, ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient_dim);
        }
        Matrix::from_rows(field, vectors).row_space()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its component along the echelon basis; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o -= &(&f * r);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coordinates of `v` in the echelon basis, if `v` is in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::from_vectors(self.field, self.ambient_dim, vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Solve a·U = b·W via the kernel of [U; -W]ᵀ.
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.field, self.ambient_dim);
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().map(|r| r.iter().map(|x| -x).collect()));
        let stacked = Matrix::from_rows(self.field, rows);
        let ker = stacked.transpose().kernel();
        let vs = ker
            .basis()
            .iter()
            .map(|c| {
                let mut v = vec![self.field.zero(); self.ambient_dim];
                for (coef, row) in c[..self.dim()].iter().zip(&self.basis) {
                    for (o, r) in v.iter_mut().zip(row) {
                        *o += &(coef * r);
                    }
                }
                v
            })
            .collect();
        Subspace::from_vectors(self.field, self.ambient_dim, vs)
    }
}

impl Matrix {
    /// Row space as a subspace.
    pub fn row_space(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { field: self.field(), ambient_dim: self.cols(), basis, pivots }
    }
}

/// A complement of `sub` inside `ambient`, with the projection onto it.
#[derive(Clone, Debug)]
pub struct Quotient {
    sub: Subspace,
    complement: Subspace,
}

impl Quotient {
    pub fn complement(&self) -> &[Vec<Scalar>] {
        self.complement.basis()
    }

    pub fn dim(&self) -> usize {
        self.complement.dim()
    }

    /// Splits an ambient vector into `(sub part, complement coordinates)`.
    pub fn project(&self, v: &[Scalar]) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
        let residue = self.sub.reduce(v);
        let coords = self.complement.coordinates(&residue).ok_or(Error::NotASubspace)?;
        let sub_part = v.iter().zip(&residue).map(|(a, b)| a - b).collect();
        Ok((sub_part, coords))
    }
}

/// Complement of `sub` in `ambient` chosen by the leftmost-pivot rule: ambient basis vectors
/// are reduced modulo `sub` and the residues are put in echelon form.
pub fn quotient_basis(sub: &Subspace, ambient: &Subspace) -> Result<Quotient> {
    if !sub.is_subspace_of(ambient) {
        return Err(Error::NotASubspace);
    }
    let residues: Vec<Vec<Scalar>> = ambient
        .basis()
        .iter()
        .map(|v| sub.reduce(v))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let complement = Subspace::from_vectors(ambient.field(), ambient.ambient_dim(), residues);
    // Complement rows vanish on sub's pivot columns; reduce them once more so that
    // projection coordinates are read off directly.
    let complement = Subspace::from_vectors(
        ambient.field(),
        ambient.ambient_dim(),
        complement.basis().iter().map(|v| sub.reduce(v)).collect(),
    );
    Ok(Quotient { sub: sub.clone(), complement })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn quotient_edge_cases() {
        let amb = Subspace::full(Q, 2);
        assert_eq!(quotient_basis(&amb, &amb).unwrap().dim(), 0);
        let zero = Subspace::zero(Q, 2);
        let q = quotient_basis(&zero, &amb).unwrap();
        assert_eq!(q.complement(), amb.basis());
    }

    #[test]
    fn quotient_leftmost_pivot() {
        let amb = Subspace::full(Q, 2);
        let sub = Subspace::from_vectors(Q, 2, vec![v(&[1, 1])]);
        let q = quotient_basis(&sub, &amb).unwrap();
        assert_eq!(q.complement(), &[v(&[0, 1])]);
        let (s, c) = q.project(&v(&[3, 5])).unwrap();
        assert_eq!(s, v(&[3, 3]));
        assert_eq!(c, v(&[2]));
    }

    #[test]
    fn quotient_requires_containment() {
        let a = Subspace::from_vectors(Q, 2, vec![v(&[1, 0])]);
        let b = Subspace::from_vectors(Q, 2, vec![v(&[0, 1])]);
        assert!(matches!(quotient_basis(&a, &b), Err(Error::NotASubspace)));
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::from_vectors(Q, 3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::from_vectors(Q, 3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&[0, 2, 0])));
        assert_eq!(a.sum(&b).dim(), 3);
    }
}
