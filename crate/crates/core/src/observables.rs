//! The algebra of observables `O(M) = (H_ij ⊗ Hom_k(M_i, M_j))`, the versal morphism
//! `η: A → O(M)` and the Burnside-type verdicts built on them.

use serde::Serialize;

use crate::algebra::quiver::Word;
use crate::algebra::{
    endomorphisms, family_image_dim, family_kernel, radical, simplicity_certificate, Algebra, ModuleRep,
    SimplicityCertificate, Verdict,
};
use crate::error::{Error, Result};
use crate::hull::{run_hull, HullOptions, ProCouple};
use crate::linalg::{Matrix, Scalar, Subspace};

/// Basis label `w ⊗ E_pq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObsLabel {
    pub word: Word,
    pub p: usize,
    pub q: usize,
}

#[derive(Clone, Debug)]
pub struct ObservablesAlg {
    pub algebra: Algebra,
    pub labels: Vec<ObsLabel>,
    /// Whether `H` was stabilized (otherwise `O` is built on `H / J^{top+1}`).
    pub exact: bool,
    pub module_dims: Vec<usize>,
}

impl ObservablesAlg {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Labels of positive word degree span the radical.
    pub fn radical_labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels.iter().enumerate().filter(|(_, l)| l.word.degree() > 0).map(|(i, _)| i)
    }

    /// Projection onto `⊕ End_k(M_i)`: the degree-0 components as block matrices.
    pub fn project(&self, v: &[Scalar]) -> Vec<Matrix> {
        let field = self.algebra.field();
        let mut out: Vec<Matrix> = self.module_dims.iter().map(|&d| Matrix::zeros(field, d, d)).collect();
        for (k, l) in self.labels.iter().enumerate() {
            if l.word.degree() == 0 && !v[k].is_zero() {
                let m = &mut out[l.word.start];
                let x = &m[(l.p, l.q)] + &v[k];
                m[(l.p, l.q)] = x;
            }
        }
        out
    }
}

/// Builds `O(M)` on the normal words of the hull.
pub fn assemble(pc: &ProCouple) -> ObservablesAlg {
    let field = pc.field();
    let q = &pc.quiver;
    let module_dims: Vec<usize> = pc.complex.family().iter().map(ModuleRep::dim).collect();
    let mut labels = Vec::new();
    for w in pc.basis() {
        for p in 0..module_dims[w.start] {
            for r in 0..module_dims[w.end(q)] {
                labels.push(ObsLabel { word: w.clone(), p, q: r });
            }
        }
    }
    let index = |w: &Word, p: usize, r: usize| labels.iter().position(|l| l.word == *w && l.p == p && l.q == r);
    let mut table = Vec::with_capacity(labels.len());
    for a in &labels {
        let mut row = Vec::with_capacity(labels.len());
        for b in &labels {
            let mut terms = Vec::new();
            if a.q == b.p {
                if let Some(ab) = a.word.concat(&b.word, q) {
                    for (w, c) in pc.quotient.nf(&ab, field) {
                        let k = index(&w, a.p, b.q).expect("normal forms stay in the basis");
                        terms.push((k, c));
                    }
                    terms.sort_by_key(|(k, _)| *k);
                }
            }
            row.push(terms);
        }
        table.push(row);
    }
    let unit = labels.iter().map(|l| if l.word.degree() == 0 && l.p == l.q { field.one() } else { field.zero() }).collect();
    let names = labels
        .iter()
        .map(|l| format!("{}⊗E{}{}", l.word.render(q), l.p + 1, l.q + 1))
        .collect();
    ObservablesAlg { algebra: Algebra::from_table(field, names, unit, table), labels, exact: pc.stabilized, module_dims }
}

#[derive(Clone, Debug)]
pub struct VersalMorphism {
    /// Row `a` is `η(b_a)` in the label basis.
    pub matrix: Matrix,
    pub kernel: Subspace,
    pub image: Subspace,
}

/// `η(a) = Σ e_i ⊗ ρ_i(a) + Σ_w w ⊗ ψ_w(a)`, checked to be multiplicative on all basis pairs.
pub fn versal_morphism(pc: &ProCouple, obs: &ObservablesAlg) -> Result<VersalMorphism> {
    let alg = pc.complex.algebra();
    let field = alg.field();
    let rows: Vec<Vec<Scalar>> = (0..alg.dim())
        .map(|a| {
            let mut row = vec![field.zero(); obs.dim()];
            let mut cache: Option<(&Word, Matrix)> = None;
            for (k, l) in obs.labels.iter().enumerate() {
                if cache.as_ref().is_none_or(|(w, _)| *w != &l.word) {
                    cache = Some((&l.word, pc.eta_coefficient(&l.word, a)));
                }
                row[k] = cache.as_ref().unwrap().1[(l.p, l.q)].clone();
            }
            row
        })
        .collect();
    for a in 0..alg.dim() {
        for b in 0..alg.dim() {
            let lhs = obs.algebra.mul(&rows[a], &rows[b]);
            let mut rhs = vec![field.zero(); obs.dim()];
            for (k, c) in alg.product(a, b) {
                for (x, y) in rhs.iter_mut().zip(&rows[*k]) {
                    if !y.is_zero() {
                        *x += &(c * y);
                    }
                }
            }
            if lhs != rhs {
                return Err(Error::NotAHomomorphism(a, b));
            }
        }
    }
    if obs.dim() == 0 {
        return Ok(VersalMorphism {
            matrix: Matrix::zeros(field, alg.dim(), 0),
            kernel: Subspace::full(field, alg.dim()),
            image: Subspace::zero(field, 0),
        });
    }
    let matrix = Matrix::from_rows(field, rows);
    let kernel = matrix.transpose().kernel();
    let image = matrix.row_space();
    Ok(VersalMorphism { matrix, kernel, image })
}

#[derive(Clone, Debug, Serialize)]
pub struct StandardBlock {
    pub i: usize,
    pub j: usize,
    pub ambient_dim: usize,
    pub image_dim: usize,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StandardForm {
    pub full: bool,
    pub blocks: Vec<StandardBlock>,
}

fn render_matrix(m: &Matrix) -> String {
    if m.rows() == 1 && m.cols() == 1 {
        return m[(0, 0)].to_string();
    }
    let rows: Vec<String> = m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")).collect();
    format!("[{}]", rows.join("; "))
}

/// An element of `O(M)` as `w ⊗ matrix` terms.
pub fn render_element(pc: &ProCouple, obs: &ObservablesAlg, v: &[Scalar]) -> String {
    let field = pc.field();
    let mut parts = Vec::new();
    let mut k = 0;
    while k < obs.labels.len() {
        let w = &obs.labels[k].word;
        let (r, c) = (obs.module_dims[w.start], obs.module_dims[w.end(&pc.quiver)]);
        let mut m = Matrix::zeros(field, r, c);
        for l in &obs.labels[k..k + r * c] {
            m[(l.p, l.q)] = v[k + l.p * c + l.q].clone();
        }
        if !m.is_zero() {
            let coeff = render_matrix(&m);
            parts.push(if coeff == "1" { w.render(&pc.quiver) } else { format!("{}⊗{}", w.render(&pc.quiver), coeff) });
        }
        k += r * c;
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Per block `(i, j)`, a basis of the projection of `im η` onto `H_ij ⊗ Hom(M_i, M_j)`.
pub fn standard_form(pc: &ProCouple, obs: &ObservablesAlg, eta: &VersalMorphism) -> StandardForm {
    let field = pc.field();
    let r = obs.module_dims.len();
    let mut blocks = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let in_block: Vec<bool> =
                obs.labels.iter().map(|l| l.word.start == i && l.word.end(&pc.quiver) == j).collect();
            let ambient_dim = in_block.iter().filter(|b| **b).count();
            if ambient_dim == 0 {
                continue;
            }
            let projected: Vec<Vec<Scalar>> = eta
                .image
                .basis()
                .iter()
                .map(|v| v.iter().zip(&in_block).map(|(x, b)| if *b { x.clone() } else { field.zero() }).collect())
                .collect();
            let sub = Subspace::from_vectors(field, obs.dim(), projected);
            let basis = sub.basis().iter().map(|v| render_element(pc, obs, v)).collect();
            blocks.push(StandardBlock { i, j, ambient_dim, image_dim: sub.dim(), basis });
        }
    }
    StandardForm { full: eta.image.dim() == obs.dim(), blocks }
}

#[derive(Clone, Debug, Serialize)]
pub struct BurnsideReport {
    pub end_dims: Vec<usize>,
    pub certificates: Vec<SimplicityCertificate>,
    pub classical_surjective: bool,
    pub eta_injective: bool,
    pub eta_surjective: bool,
    pub gr0_iso: bool,
    pub gr1_iso: bool,
    pub dim_a: usize,
    pub dim_o: usize,
    pub dim_ker: usize,
    pub dim_im: usize,
    pub dim_j_mod_j2: usize,
    pub dim_o1: usize,
    pub gr1_rank: usize,
    pub standard_form: StandardForm,
}

pub fn burnside_report(pc: &ProCouple, obs: &ObservablesAlg, eta: &VersalMorphism) -> BurnsideReport {
    let alg = pc.complex.algebra();
    let family = pc.complex.family();
    let field = alg.field();
    let end_dims = family.iter().map(|m| endomorphisms(alg, m).len()).collect();
    let certificates = family.iter().map(|m| simplicity_certificate(alg, m)).collect();
    let sum_sq: usize = family.iter().map(|m| m.dim() * m.dim()).sum();
    let classical_surjective = family_image_dim(alg, family) == sum_sq;

    // J(A) relative to the family; gr0 is induced by ρ, injective by construction
    let j = family_kernel(alg, family);
    let gr0_iso = classical_surjective;
    let j2 = alg.product_space(&j, &j);
    let dim_j_mod_j2 = j.dim() - j2.dim();
    let deg1: Vec<usize> = obs.labels.iter().enumerate().filter(|(_, l)| l.word.degree() == 1).map(|(k, _)| k).collect();
    let dim_o1 = deg1.len();
    let gr1_rank = if j.dim() == 0 || dim_o1 == 0 {
        0
    } else {
        let rows = j
            .basis()
            .iter()
            .map(|x| {
                let image = eta.matrix.vec_mul(x);
                deg1.iter().map(|&k| image[k].clone()).collect()
            })
            .collect();
        Matrix::from_rows(field, rows).rank()
    };
    let gr1_iso = dim_j_mod_j2 == dim_o1 && gr1_rank == dim_o1;
    BurnsideReport {
        end_dims,
        certificates,
        classical_surjective,
        eta_injective: eta.kernel.dim() == 0,
        eta_surjective: eta.image.dim() == obs.dim(),
        gr0_iso,
        gr1_iso,
        dim_a: alg.dim(),
        dim_o: obs.dim(),
        dim_ker: eta.kernel.dim(),
        dim_im: eta.image.dim(),
        dim_j_mod_j2,
        dim_o1,
        gr1_rank,
        standard_form: standard_form(pc, obs, eta),
    }
}

/// The family as right `O(M)`-modules: `w ⊗ E_pq` acts by `E_pq` on `M_i` when `w = e_i`.
pub fn family_over_observables(obs: &ObservablesAlg, names: &[String]) -> Vec<ModuleRep> {
    let field = obs.algebra.field();
    obs.module_dims
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let action = obs
                .labels
                .iter()
                .map(|l| {
                    if l.word == Word::empty(i) {
                        Matrix::unit(field, d, d, l.p, l.q)
                    } else {
                        Matrix::zeros(field, d, d)
                    }
                })
                .collect();
            ModuleRep::new(names[i].clone(), d, action)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub dim_b: usize,
    pub family_is_simple: bool,
    pub hull_graded_dims: Vec<usize>,
    pub closure_hull_graded_dims: Vec<usize>,
    pub dim_o_b: usize,
    pub eta_b_injective: bool,
    pub eta_b_surjective: bool,
}

impl ClosureReport {
    pub fn eta_b_bijective(&self) -> bool {
        self.eta_b_injective && self.eta_b_surjective
    }
}

/// Re-runs the pipeline over `B = O(M)` with the family viewed as `B`-modules.
pub fn closure_check(pc: &ProCouple, obs: &ObservablesAlg, opts: HullOptions) -> Result<ClosureReport> {
    let alg = pc.complex.algebra();
    let family = pc.complex.family();
    for m in family {
        let e = endomorphisms(alg, m).len();
        if e != 1 {
            return Err(Error::HypothesisViolated(format!(
                "closure needs End_A(M) = k for every module, but End_A({}) has dimension {e}",
                m.name
            )));
        }
    }
    if !obs.exact {
        return Err(Error::HypothesisViolated("closure needs a stabilized hull".into()));
    }
    let b = &obs.algebra;
    b.validate()?;
    let names: Vec<String> = family.iter().map(|m| m.name.clone()).collect();
    let fam_b = family_over_observables(obs, &names);
    for m in &fam_b {
        m.validate(b)?;
    }
    let family_is_simple = radical(b, &fam_b).is_ok()
        && fam_b.iter().all(|m| simplicity_certificate(b, m).verdict == Verdict::SplitSimple);
    let pc_b = run_hull(b, &fam_b, opts)?;
    let obs_b = assemble(&pc_b);
    let eta_b = versal_morphism(&pc_b, &obs_b)?;
    Ok(ClosureReport {
        dim_b: b.dim(),
        family_is_simple,
        hull_graded_dims: pc.graded_dims(),
        closure_hull_graded_dims: pc_b.graded_dims(),
        dim_o_b: obs_b.dim(),
        eta_b_injective: eta_b.kernel.dim() == 0,
        eta_b_surjective: eta_b.image.dim() == obs_b.dim(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;

    fn upper_triangular() -> (Algebra, Vec<ModuleRep>) {
        let q = FieldSpec::Rational;
        let mats = [
            Matrix::from_i64(q, &[&[1, 0], &[0, 0]]),
            Matrix::from_i64(q, &[&[0, 1], &[0, 0]]),
            Matrix::from_i64(q, &[&[0, 0], &[0, 1]]),
        ];
        let a = Algebra::from_matrix_span(q, vec!["e11".into(), "e12".into(), "e22".into()], &mats).unwrap();
        let s1 = ModuleRep::one_dim("S1", &[q.one(), q.zero(), q.zero()]);
        let s2 = ModuleRep::one_dim("S2", &[q.zero(), q.zero(), q.one()]);
        (a, vec![s1, s2])
    }

    #[test]
    fn upper_triangular_is_its_own_observables() {
        let (a, fam) = upper_triangular();
        let pc = run_hull(&a, &fam, HullOptions::default()).unwrap();
        assert!(pc.stabilized);
        let obs = assemble(&pc);
        obs.algebra.validate().unwrap();
        assert_eq!(obs.dim(), 3);
        let eta = versal_morphism(&pc, &obs).unwrap();
        let rep = burnside_report(&pc, &obs, &eta);
        assert!(rep.eta_injective && rep.eta_surjective && rep.gr0_iso && rep.gr1_iso);
        assert_eq!(rep.dim_j_mod_j2, 1);
        let cl = closure_check(&pc, &obs, HullOptions::default()).unwrap();
        assert!(cl.eta_b_bijective() && cl.family_is_simple);
        assert_eq!(cl.closure_hull_graded_dims, cl.hull_graded_dims);
    }

    #[test]
    fn eta_lifts_rho() {
        let (a, fam) = upper_triangular();
        let pc = run_hull(&a, &fam, HullOptions::default()).unwrap();
        let obs = assemble(&pc);
        let eta = versal_morphism(&pc, &obs).unwrap();
        for k in 0..a.dim() {
            let proj = obs.project(eta.matrix.row(k));
            for (i, m) in fam.iter().enumerate() {
                assert_eq!(&proj[i], m.act(k));
            }
        }
    }
}
