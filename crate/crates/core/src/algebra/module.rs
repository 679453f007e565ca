use super::structure::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

/// A right module given by one `dim × dim` matrix per algebra basis element,
/// acting on row vectors: `m · a = m ρ(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleRep {
    pub name: String,
    dim: usize,
    action: Vec<Matrix>,
}

impl ModuleRep {
    pub fn new(name: impl Into<String>, dim: usize, action: Vec<Matrix>) -> Self {
        ModuleRep { name: name.into(), dim, action }
    }

    /// One-dimensional module with the given scalar action on each basis element.
    pub fn one_dim(name: impl Into<String>, values: &[Scalar]) -> Self {
        let action = values.iter().map(|v| Matrix::from_rows(v.field(), vec![vec![v.clone()]])).collect();
        ModuleRep { name: name.into(), dim: 1, action }
    }

    /// The regular right module `A_A`, in the basis of `A`.
    pub fn regular(alg: &Algebra) -> Self {
        let n = alg.dim();
        let action = (0..n)
            .map(|a| {
                let rows = (0..n).map(|i| alg.dense(alg.product(i, a))).collect();
                Matrix::from_rows(alg.field(), rows)
            })
            .collect();
        ModuleRep { name: "A".into(), dim: n, action }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `ρ(b_k)`.
    pub fn act(&self, k: usize) -> &Matrix {
        &self.action[k]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    /// `ρ(a)` for a dense element.
    pub fn rho(&self, a: &[Scalar]) -> Matrix {
        let field = self.action.first().map(Matrix::field).expect("module over a nonzero algebra");
        let mut m = Matrix::zeros(field, self.dim, self.dim);
        for (k, c) in a.iter().enumerate() {
            m.add_scaled(c, &self.action[k]);
        }
        m
    }

    pub fn direct_sum(&self, other: &ModuleRep) -> ModuleRep {
        let d = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(a.field(), d, d);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        m[(i, j)] = a[(i, j)].clone();
                    }
                }
                for i in 0..other.dim {
                    for j in 0..other.dim {
                        m[(self.dim + i, self.dim + j)] = b[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        ModuleRep { name: format!("{}+{}", self.name, other.name), dim: d, action }
    }

    /// Checks `ρ(1) = I` and `ρ(b_i)ρ(b_j) = Σ_k c_ijk ρ(b_k)`.
    pub fn validate(&self, alg: &Algebra) -> Result<()> {
        let err = |reason: String| Error::InvalidModule { module: self.name.clone(), reason };
        if self.dim == 0 {
            return Err(err("dimension must be positive".into()));
        }
        if self.action.len() != alg.dim() {
            return Err(err(format!("expected {} action matrices, got {}", alg.dim(), self.action.len())));
        }
        for (k, m) in self.action.iter().enumerate() {
            if m.rows() != self.dim || m.cols() != self.dim || m.field() != alg.field() {
                return Err(err(format!("action of {} has the wrong shape or field", alg.names()[k])));
            }
        }
        if self.rho(alg.unit()) != Matrix::identity(alg.field(), self.dim) {
            return Err(err("the unit does not act as the identity".into()));
        }
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = self.action[i].mul(&self.action[j]);
                let rhs = self.rho(&alg.dense(alg.product(i, j)));
                if lhs != rhs {
                    return Err(err(format!(
                        "action is not multiplicative on ({}, {})",
                        alg.names()[i],
                        alg.names()[j]
                    )));
                }
            }
        }
        Ok(())
    }
}
