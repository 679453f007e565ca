//! Scenario files: a field, an algebra, a family of modules and run options.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::quiver::{parse_poly, Arrow, Quiver, Word};
use crate::algebra::{Algebra, MatricPresentation, ModuleRep, PathAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar};

pub const SCENARIO_SCHEMA: &str = "nchull.scenario/1";

/// A scalar written as an integer or as a string such as `"-3/4"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl ScalarText {
    pub fn parse(&self, field: FieldSpec) -> Result<Scalar> {
        match self {
            ScalarText::Int(n) => Ok(field.from_i64(*n)),
            ScalarText::Text(s) => field.parse(s),
        }
    }
}

pub type MatrixText = Vec<Vec<ScalarText>>;

fn parse_matrix(m: &MatrixText, field: FieldSpec, rows: usize, cols: usize, what: &str) -> Result<Matrix> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::Shape(format!("{what}: expected a {rows}×{cols} matrix")));
    }
    let rows = m.iter().map(|r| r.iter().map(|x| x.parse(field)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Ok(if rows.is_empty() || cols == 0 { Matrix::zeros(field, rows.len(), cols) } else { Matrix::from_rows(field, rows) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub terms: BTreeMap<String, ScalarText>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub name: String,
    /// 1-based points.
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub poly: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lead: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    /// Products not listed are zero.
    StructureConstants { basis: Vec<String>, unit: Vec<ScalarText>, products: Vec<ProductEntry> },
    /// `k[x]/(c_0 + c_1 x + … + x^n)`.
    PolynomialQuotient { modulus: Vec<ScalarText> },
    /// The span of the given matrices, which must be closed under products and contain `1`.
    MatrixSpan { basis: Vec<String>, matrices: Vec<MatrixText> },
    /// `kQ/(relations)`, truncated above `cochain_support_cap`.
    Presentation { points: usize, arrows: Vec<ArrowSpec>, relations: Vec<RelationSpec> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleSource {
    /// One matrix per basis element of the algebra.
    Action { action: Vec<MatrixText> },
    /// The matrix of `x` for a polynomial quotient.
    Generator { generator: MatrixText },
    /// The simple module at a point (1-based) of a presentation.
    Vertex { vertex: usize },
    /// Matrices of the idempotents and the arrows of a presentation.
    Quiver { idempotents: Vec<MatrixText>, arrows: BTreeMap<String, MatrixText> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(flatten)]
    pub source: ModuleSource,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    #[default]
    Json,
    Text,
}

fn default_degree_cap() -> usize {
    8
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_degree_cap")]
    pub degree_cap: usize,
    /// Truncation degree of a presentation; defaults to `degree_cap`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cochain_support_cap: Option<usize>,
    #[serde(default)]
    pub emit: Emit,
    /// Whether the family is declared to be every simple module.
    #[serde(default = "default_true")]
    pub complete_family: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { degree_cap: 8, cochain_support_cap: None, emit: Emit::Json, complete_family: true }
    }
}

impl Options {
    pub fn support_cap(&self) -> usize {
        self.cochain_support_cap.unwrap_or(self.degree_cap)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub field: FieldSpec,
    pub algebra: AlgebraSpec,
    pub modules: Vec<ModuleSpec>,
    #[serde(default)]
    pub options: Options,
}

/// A scenario turned into exact objects.
#[derive(Clone, Debug)]
pub struct Problem {
    pub algebra: Algebra,
    pub family: Vec<ModuleRep>,
    pub presentation: Option<PathAlgebra>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if s.schema != SCENARIO_SCHEMA {
            return Err(Error::Schema(format!("unsupported schema {:?}, expected {SCENARIO_SCHEMA:?}", s.schema)));
        }
        s.field.validate()?;
        if s.modules.is_empty() {
            return Err(Error::Schema("the family is empty".into()));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenarios serialize")
    }

    pub fn build(&self) -> Result<Problem> {
        let field = self.field;
        let (algebra, presentation) = match &self.algebra {
            AlgebraSpec::StructureConstants { basis, unit, products } => {
                (structure_constants(field, basis, unit, products)?, None)
            }
            AlgebraSpec::PolynomialQuotient { modulus } => {
                let m = modulus.iter().map(|c| c.parse(field)).collect::<Result<Vec<_>>>()?;
                (Algebra::polynomial_quotient(field, &m)?, None)
            }
            AlgebraSpec::MatrixSpan { basis, matrices } => {
                let n = matrices.first().map_or(0, Vec::len);
                let mats = matrices
                    .iter()
                    .enumerate()
                    .map(|(k, m)| parse_matrix(m, field, n, n, &format!("matrix {}", k + 1)))
                    .collect::<Result<Vec<_>>>()?;
                (Algebra::from_matrix_span(field, basis.clone(), &mats)?, None)
            }
            AlgebraSpec::Presentation { points, arrows, relations } => {
                let pa = presentation(field, *points, arrows, relations, self.options.support_cap())?;
                (pa.algebra.clone(), Some(pa))
            }
        };
        algebra.validate()?;
        let mut family = Vec::with_capacity(self.modules.len());
        for m in &self.modules {
            let rep = build_module(field, &algebra, presentation.as_ref(), m)?;
            rep.validate(&algebra)?;
            family.push(rep);
        }
        Ok(Problem { algebra, family, presentation })
    }
}

fn structure_constants(
    field: FieldSpec,
    basis: &[String],
    unit: &[ScalarText],
    products: &[ProductEntry],
) -> Result<Algebra> {
    let n = basis.len();
    let index = |s: &str| {
        basis.iter().position(|b| b == s).ok_or_else(|| Error::Schema(format!("unknown basis element {s:?}")))
    };
    if unit.len() != n {
        return Err(Error::Shape(format!("unit has {} coordinates, basis has {n}", unit.len())));
    }
    let unit = unit.iter().map(|c| c.parse(field)).collect::<Result<Vec<_>>>()?;
    let mut table = vec![vec![vec![field.zero(); n]; n]; n];
    for e in products {
        let (i, j) = (index(&e.left)?, index(&e.right)?);
        for (k, c) in &e.terms {
            table[i][j][index(k)?] = c.parse(field)?;
        }
    }
    Ok(Algebra::from_fn(field, basis.to_vec(), unit, |i, j| table[i][j].clone()))
}

fn presentation(
    field: FieldSpec,
    points: usize,
    arrows: &[ArrowSpec],
    relations: &[RelationSpec],
    cap: usize,
) -> Result<PathAlgebra> {
    let mut qa = Vec::with_capacity(arrows.len());
    for a in arrows {
        if a.src == 0 || a.dst == 0 || a.src > points || a.dst > points {
            return Err(Error::Schema(format!("arrow {:?} has an endpoint outside 1..={points}", a.name)));
        }
        qa.push(Arrow { name: a.name.clone(), src: a.src - 1, dst: a.dst - 1 });
    }
    let quiver = Quiver { points, arrows: qa };
    quiver.validate()?;
    let mut rels = Vec::with_capacity(relations.len());
    for r in relations {
        let poly = parse_poly(&r.poly, &quiver, field)?;
        let lead = match &r.lead {
            None => None,
            Some(l) => Some(single_word(&parse_poly(l, &quiver, field)?, l)?),
        };
        rels.push((poly, lead));
    }
    MatricPresentation::new(field, quiver, rels, cap)?.truncated_algebra()
}

fn single_word(p: &crate::algebra::quiver::Poly, text: &str) -> Result<Word> {
    match p.iter().next() {
        Some((w, c)) if p.len() == 1 && c.is_one() => Ok(w.clone()),
        _ => Err(Error::Parse(format!("lead {text:?} must be a single monomial"))),
    }
}

fn build_module(field: FieldSpec, alg: &Algebra, pa: Option<&PathAlgebra>, m: &ModuleSpec) -> Result<ModuleRep> {
    let invalid = |reason: &str| Error::InvalidModule { module: m.name.clone(), reason: reason.into() };
    let dim_of = |mats: &[MatrixText]| m.dim.or_else(|| mats.first().map(Vec::len)).ok_or_else(|| invalid("cannot infer the dimension"));
    match &m.source {
        ModuleSource::Action { action } => {
            if action.len() != alg.dim() {
                return Err(invalid(&format!("{} action matrices for an algebra of dimension {}", action.len(), alg.dim())));
            }
            let d = dim_of(action)?;
            let mats = action
                .iter()
                .zip(alg.names())
                .map(|(x, n)| parse_matrix(x, field, d, d, &format!("{}: action of {n}", m.name)))
                .collect::<Result<Vec<_>>>()?;
            Ok(ModuleRep::new(m.name.clone(), d, mats))
        }
        ModuleSource::Generator { generator } => {
            let d = dim_of(std::slice::from_ref(generator))?;
            let x = parse_matrix(generator, field, d, d, &format!("{}: generator", m.name))?;
            let mut mats = vec![Matrix::identity(field, d)];
            while mats.len() < alg.dim() {
                let next = mats.last().unwrap().mul(&x);
                mats.push(next);
            }
            if alg.names().get(1).is_some_and(|n| n != "x") {
                return Err(invalid("a generator is only meaningful for a polynomial quotient"));
            }
            Ok(ModuleRep::new(m.name.clone(), d, mats))
        }
        ModuleSource::Vertex { vertex } => {
            let pa = pa.ok_or_else(|| invalid("vertex modules need a presentation"))?;
            if *vertex == 0 || *vertex > pa.presentation.quiver().points {
                return Err(invalid("vertex out of range"));
            }
            pa.vertex_module(&m.name, vertex - 1)
        }
        ModuleSource::Quiver { idempotents, arrows } => {
            let pa = pa.ok_or_else(|| invalid("quiver modules need a presentation"))?;
            let q = pa.presentation.quiver();
            if idempotents.len() != q.points {
                return Err(invalid("one idempotent matrix per point is required"));
            }
            let d = dim_of(idempotents)?;
            let es = idempotents
                .iter()
                .map(|e| parse_matrix(e, field, d, d, &format!("{}: idempotent", m.name)))
                .collect::<Result<Vec<_>>>()?;
            if let Some(extra) = arrows.keys().find(|k| q.arrow_index(k).is_none()) {
                return Err(invalid(&format!("unknown arrow {extra:?}")));
            }
            let xs = q
                .arrows
                .iter()
                .map(|a| match arrows.get(&a.name) {
                    Some(x) => parse_matrix(x, field, d, d, &format!("{}: arrow {}", m.name, a.name)),
                    None => Ok(Matrix::zeros(field, d, d)),
                })
                .collect::<Result<Vec<_>>>()?;
            pa.module_from_generators(&m.name, &es, &xs)
        }
    }
}

/// Scenarios shipped with the crate.
pub const BUNDLED: &[(&str, &str)] = &[
    ("z3_gf7", include_str!("../scenarios/z3_gf7.json")),
    ("z3_gf3", include_str!("../scenarios/z3_gf3.json")),
    ("z3_rational", include_str!("../scenarios/z3_rational.json")),
    ("laudal_example", include_str!("../scenarios/laudal_example.json")),
    ("upper_triangular_2", include_str!("../scenarios/upper_triangular_2.json")),
    ("upper_triangular_3", include_str!("../scenarios/upper_triangular_3.json")),
    ("dual_numbers", include_str!("../scenarios/dual_numbers.json")),
    ("product_partial_family", include_str!("../scenarios/product_partial_family.json")),
];

pub fn bundled(name: &str) -> Option<Scenario> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| Scenario::from_json(t).expect("bundled scenarios parse"))
}
