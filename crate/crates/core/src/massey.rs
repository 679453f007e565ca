//! Cup products, defining systems and matric Massey products.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hochschild::{Cochain1, Cochain2, Complex, Registry};
use crate::linalg::Scalar;

/// `(α·β)(a,b) = α(a)β(b)`: compose `α` then `β` under the row convention.
pub fn cup(alpha: &Cochain1, beta: &Cochain1) -> Result<Cochain2> {
    if alpha.dst != beta.src || alpha.cols != beta.rows {
        return Err(Error::EndpointMismatch(format!(
            "cup of cochains on pairs ({}, {}) and ({}, {})",
            alpha.src + 1,
            alpha.dst + 1,
            beta.src + 1,
            beta.dst + 1
        )));
    }
    let mut out = Cochain2::zero(alpha.src, beta.dst, alpha.rows, beta.cols);
    for (&a, x) in &alpha.values {
        for (&b, y) in &beta.values {
            let xy = x.mul(y);
            if !xy.is_zero() {
                let one = xy.field().one();
                out.add_entry((a, b), &one, &xy);
            }
        }
    }
    Ok(out)
}

/// Which sign convention a Massey value is reported in.
///
/// `DefiningSystem`: `d(α_ij) = Σ α_il·α_lj` and the value is the class of `Σ α_1l·α_lr`.
/// `LiftingAction`: cochains `ψ^{ij} = (-1)^{j-i+1} α_ij` as used when lifting actions,
/// which multiplies the value by `(-1)^{r+1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MasseySign {
    #[default]
    DefiningSystem,
    LiftingAction,
}

impl MasseySign {
    /// Factor relating the two conventions for a system of length `r`.
    pub fn factor(self, r: usize, field: crate::linalg::FieldSpec) -> Scalar {
        match self {
            MasseySign::LiftingAction if r % 2 == 0 => field.from_i64(-1),
            _ => field.one(),
        }
    }
}

/// Cochains `α_ij` (0-based positions `i < j` along `chain`) of a defining system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningSystem {
    /// Module index at each position; `r = chain.len()`.
    pub chain: Vec<usize>,
    pub alpha: BTreeMap<(usize, usize), Cochain1>,
}

impl DefiningSystem {
    /// Starts a system from consecutive cocycles `α_{i,i+1}`.
    pub fn new(cx: &Complex, consecutive: Vec<Cochain1>) -> Result<Self> {
        if consecutive.is_empty() {
            return Err(Error::Schema("a defining system needs at least one cochain".into()));
        }
        let mut chain = vec![consecutive[0].src];
        let mut alpha = BTreeMap::new();
        for (i, a) in consecutive.into_iter().enumerate() {
            if a.src != chain[i] {
                return Err(Error::EndpointMismatch(format!("cochain {} does not start at module {}", i + 1, chain[i] + 1)));
            }
            if !cx.d1(&a).is_zero() {
                return Err(Error::HypothesisViolated(format!("cochain {} is not a cocycle", i + 1)));
            }
            chain.push(a.dst);
            alpha.insert((i, i + 1), a);
        }
        Ok(DefiningSystem { chain, alpha })
    }

    pub fn r(&self) -> usize {
        self.chain.len()
    }

    /// `Σ_{l} α_il·α_lj` over `i < l < j`.
    pub fn product_sum(&self, cx: &Complex, i: usize, j: usize) -> Result<Cochain2> {
        let mut out = cx.zero2(self.chain[i], self.chain[j]);
        let one = cx.field().one();
        for l in i + 1..j {
            let (a, b) = match (self.alpha.get(&(i, l)), self.alpha.get(&(l, j))) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Invariant(format!("defining system slot missing below ({}, {})", i + 1, j + 1))),
            };
            out.add_scaled(&one, &cup(a, b)?);
        }
        Ok(out)
    }

    /// Verifies `d1(α_ij) = Σ α_il·α_lj` on every filled slot.
    pub fn verify(&self, cx: &Complex) -> Result<()> {
        for (&(i, j), a) in &self.alpha {
            let lhs = cx.d1(a);
            let rhs = if j == i + 1 { cx.zero2(a.src, a.dst) } else { self.product_sum(cx, i, j)? };
            if lhs != rhs {
                return Err(Error::Invariant(format!("defining system equation fails at ({}, {})", i + 1, j + 1)));
            }
        }
        Ok(())
    }

    fn next_gap(&self) -> Option<usize> {
        let r = self.r();
        (2..r).find(|&g| (0..r - g).any(|i| !self.alpha.contains_key(&(i, i + g))))
    }
}

#[derive(Clone, Debug)]
pub enum Extension {
    /// Every slot, including `(1, r)`, is filled.
    Complete,
    Extended(DefiningSystem),
    /// `Σ α_il·α_lj` at `slot` has nonzero class coordinates.
    Obstructed { slot: (usize, usize), classes: Vec<(usize, Scalar)> },
}

/// Fills the next diagonal of `sys` with primitives, including the `(1, r)` slot when it is
/// the next one.
pub fn extend_system(cx: &Complex, reg: &mut Registry, sys: &DefiningSystem) -> Result<Extension> {
    let Some(g) = sys.next_gap() else {
        return Ok(Extension::Complete);
    };
    let mut out = sys.clone();
    for i in 0..sys.r() - g {
        let j = i + g;
        if out.alpha.contains_key(&(i, j)) {
            continue;
        }
        let target = sys.product_sum(cx, i, j)?;
        let red = reg.solve_coboundary(cx, &target)?;
        if !red.is_coboundary() {
            return Ok(Extension::Obstructed { slot: (i, j), classes: red.classes });
        }
        out.alpha.insert((i, j), red.primitive);
    }
    Ok(Extension::Extended(out))
}

/// Repeatedly extends until every slot below `(1, r)` is filled.
pub fn complete_system(cx: &Complex, reg: &mut Registry, sys: &DefiningSystem) -> Result<Extension> {
    let mut cur = sys.clone();
    loop {
        if cur.next_gap().is_none_or(|g| g == cur.r() - 1) {
            return Ok(Extension::Extended(cur));
        }
        match extend_system(cx, reg, &cur)? {
            Extension::Extended(next) => cur = next,
            other => return Ok(other),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MasseyValue {
    pub witness: Cochain2,
    pub classes: Vec<(usize, Scalar)>,
    pub convention: MasseySign,
}

impl MasseyValue {
    pub fn is_zero(&self) -> bool {
        self.classes.is_empty()
    }
}

/// The class of `Σ_l α_1l·α_lr`, in the requested sign convention.
pub fn massey_value(cx: &Complex, reg: &mut Registry, sys: &DefiningSystem, convention: MasseySign) -> Result<MasseyValue> {
    let r = sys.r();
    if r < 3 {
        return Err(Error::Schema("a Massey product needs at least two cochains".into()));
    }
    for g in 1..r - 1 {
        for i in 0..r - g {
            if !sys.alpha.contains_key(&(i, i + g)) {
                return Err(Error::Schema(format!("defining system slot ({}, {}) is empty", i + 1, i + g + 1)));
            }
        }
    }
    let factor = convention.factor(r, cx.field());
    let raw = sys.product_sum(cx, 0, r - 1)?;
    cx.check_cocycle(&raw)?;
    let red = reg.solve_coboundary(cx, &raw)?;
    let classes = red.classes.into_iter().map(|(s, x)| (s, &x * &factor)).collect();
    Ok(MasseyValue { witness: raw.scale(&factor), classes, convention })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, ModuleRep};
    use crate::linalg::{FieldSpec, Matrix};

    fn truncated_polynomial(n: usize) -> (Complex, Cochain1) {
        let q = FieldSpec::Rational;
        let mut modulus = vec![q.zero(); n + 1];
        modulus[n] = q.one();
        let a = Algebra::polynomial_quotient(q, &modulus).unwrap();
        let mut vals = vec![q.zero(); n];
        vals[0] = q.one();
        let m = ModuleRep::one_dim("k", &vals);
        let cx = Complex::new(&a, &[m]);
        let mut psi = cx.zero1(0, 0);
        psi.add_entry(1, &q.one(), &Matrix::identity(q, 1));
        (cx, psi)
    }

    #[test]
    fn cup_with_zero_and_mismatch() {
        let (cx, psi) = truncated_polynomial(2);
        assert!(cup(&psi, &cx.zero1(0, 0)).unwrap().is_zero());
        let other = Cochain1::zero(1, 0, 1, 1);
        assert!(matches!(cup(&psi, &other), Err(Error::EndpointMismatch(_))));
    }

    #[test]
    fn massey_powers_in_truncated_polynomials() {
        // k[x]/(x^3): <ψ,ψ> vanishes, <ψ,ψ,ψ> does not
        let (cx, psi) = truncated_polynomial(3);
        let mut reg = Registry::new(true);
        let sys = DefiningSystem::new(&cx, vec![psi.clone(), psi.clone()]).unwrap();
        let Extension::Extended(full) = extend_system(&cx, &mut reg, &sys).unwrap() else { panic!("x^2 ≠ 0") };
        assert!(matches!(extend_system(&cx, &mut reg, &full).unwrap(), Extension::Complete));

        let sys3 = DefiningSystem::new(&cx, vec![psi.clone(), psi.clone(), psi.clone()]).unwrap();
        let Extension::Extended(sys3) = complete_system(&cx, &mut reg, &sys3).unwrap() else { panic!() };
        sys3.verify(&cx).unwrap();
        // fresh registry: the lifting convention must not leak into the registered class
        let mut fresh = Registry::new(true);
        let w = massey_value(&cx, &mut fresh, &sys3, MasseySign::LiftingAction).unwrap();
        let v = massey_value(&cx, &mut fresh, &sys3, MasseySign::DefiningSystem).unwrap();
        assert_eq!(v.classes, vec![(0, cx.field().one())]);
        assert_eq!(w.classes, vec![(0, cx.field().from_i64(-1))]);

        // k[x]/(x^2): already the cup square is a class
        let (cx, psi) = truncated_polynomial(2);
        let mut reg = Registry::new(true);
        let sys = DefiningSystem::new(&cx, vec![psi.clone(), psi]).unwrap();
        assert!(matches!(extend_system(&cx, &mut reg, &sys).unwrap(), Extension::Obstructed { slot: (0, 2), .. }));
    }
}
