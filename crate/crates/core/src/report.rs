//! Commands over a scenario and the JSON report they produce.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{endomorphisms, family_image_dim};
use crate::error::{Error, Result};
use crate::extensions::{
    annihilation_check, build, ext_class, ext_representative, massey_vanishing_check, Annihilation, CofiltrationSpec,
    IteratedExtension, Vanishing,
};
use crate::hochschild::{Cochain1, Complex, Registry};
use crate::hull::{kernel_chain, run_hull_with_basis, HullOptions, ProCouple};
use crate::linalg::{Matrix, Scalar, Subspace};
use crate::massey::MasseySign;
use crate::observables::{
    assemble, burnside_report, closure_check, standard_form, versal_morphism, BurnsideReport, ClosureReport, StandardForm,
};
use crate::scenario::{MatrixText, Problem, RelationSpec, Scenario, ScalarText, AlgebraSpec};

pub const REPORT_SCHEMA: &str = "nchull.report/1";
pub const COCHAIN_SCHEMA: &str = "nchull.cochains/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Ext,
    Hull,
    Observables,
    Burnside,
    StandardForm,
    Closure,
    ExtensionBuild,
    ExtensionCheck,
    KernelChain,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Ext => "ext",
            Command::Hull => "hull",
            Command::Observables => "observables",
            Command::Burnside => "burnside",
            Command::StandardForm => "standard-form",
            Command::Closure => "closure",
            Command::ExtensionBuild => "extension-build",
            Command::ExtensionCheck => "extension-check",
            Command::KernelChain => "kernel-chain",
        }
    }
}

/// Representative-choice rules that can be pinned for audit runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conventions {
    /// Sign convention for reported Massey values.
    #[serde(default = "default_sign")]
    pub massey_sign: MasseySign,
    /// Recheck every defect with `d2`.
    #[serde(default = "default_true")]
    pub check_cocycles: bool,
    /// Leading words for presentation relations, keyed by 1-based relation index.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relation_leads: BTreeMap<usize, String>,
}

fn default_sign() -> MasseySign {
    MasseySign::LiftingAction
}

fn default_true() -> bool {
    true
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions { massey_sign: default_sign(), check_cocycles: true, relation_leads: BTreeMap::new() }
    }
}

impl Conventions {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("conventions: {e}")))
    }

    /// Applies the lead overrides to a scenario's presentation.
    pub fn apply(&self, scenario: &Scenario) -> Result<Scenario> {
        let mut s = scenario.clone();
        if self.relation_leads.is_empty() {
            return Ok(s);
        }
        let AlgebraSpec::Presentation { relations, .. } = &mut s.algebra else {
            return Err(Error::Schema("relation leads need a presentation".into()));
        };
        for (&k, lead) in &self.relation_leads {
            let r: &mut RelationSpec = relations
                .get_mut(k.wrapping_sub(1))
                .ok_or_else(|| Error::Schema(format!("no relation {k} to pin")))?;
            r.lead = Some(lead.clone());
        }
        Ok(s)
    }
}

/// One slot of a cochain file: Ext¹ coordinates or explicit values per basis element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotSpec {
    /// 1-based positions `(i, j)` along the chain.
    pub slot: (usize, usize),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<Vec<ScalarText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, MatrixText>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainFile {
    pub schema: String,
    /// Module names along the chain.
    pub chain: Vec<String>,
    pub slots: Vec<SlotSpec>,
}

impl CochainFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: CochainFile = serde_json::from_str(text).map_err(|e| Error::Schema(format!("cochains: {e}")))?;
        if f.schema != COCHAIN_SCHEMA {
            return Err(Error::Schema(format!("unsupported cochain schema {:?}", f.schema)));
        }
        Ok(f)
    }

    fn resolve(&self, pc: &ProCouple) -> Result<(Vec<usize>, BTreeMap<(usize, usize), Cochain1>)> {
        let cx = &pc.complex;
        let field = cx.field();
        let chain = self
            .chain
            .iter()
            .map(|n| {
                cx.family().iter().position(|m| &m.name == n).ok_or_else(|| Error::Schema(format!("no module named {n:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut slots = BTreeMap::new();
        for s in &self.slots {
            let (i, j) = s.slot;
            if i == 0 || i >= j || j > chain.len() {
                return Err(Error::Schema(format!("slot ({i}, {j}) is not above the diagonal of the chain")));
            }
            let (a, b) = (chain[i - 1], chain[j - 1]);
            let psi = match (&s.ext, &s.values) {
                (Some(coords), None) => {
                    let c = coords.iter().map(|x| x.parse(field)).collect::<Result<Vec<_>>>()?;
                    ext_representative(cx, &pc.ext, a, b, &c)?
                }
                (None, Some(values)) => {
                    let alg = cx.algebra();
                    let (r, c) = cx.dims(a, b);
                    let mut psi = cx.zero1(a, b);
                    for (name, m) in values {
                        let k = alg.index_of(name).ok_or_else(|| Error::Schema(format!("unknown basis element {name:?}")))?;
                        let rows = m.iter().map(|row| row.iter().map(|x| x.parse(field)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
                        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                            return Err(Error::Shape(format!("slot ({i}, {j}) value at {name}: expected {r}×{c}")));
                        }
                        psi.add_entry(k, &field.one(), &Matrix::from_rows(field, rows));
                    }
                    psi
                }
                _ => return Err(Error::Schema(format!("slot ({i}, {j}) needs exactly one of \"ext\" or \"values\""))),
            };
            if slots.insert((i - 1, j - 1), psi).is_some() {
                return Err(Error::Schema(format!("slot ({i}, {j}) given twice")));
            }
        }
        Ok((chain, slots))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub conventions: Conventions,
}

#[derive(Clone, Debug, Serialize)]
pub struct HullArrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub name: String,
    pub class: String,
    pub src: usize,
    pub dst: usize,
    pub poly: String,
    /// Relation after each level, keyed by the level.
    pub history: BTreeMap<usize, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HullReport {
    pub arrows: Vec<HullArrow>,
    pub relations: Vec<RelationReport>,
    pub obstruction_classes: Vec<String>,
    pub graded_dims: Vec<usize>,
    pub block_dims: Vec<Vec<usize>>,
    pub dim: usize,
    pub top_degree: usize,
    pub stabilized: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObservablesReport {
    pub dim_a: usize,
    pub dim_o: usize,
    pub ker_dim: usize,
    pub im_dim: usize,
    pub end_dims: Vec<usize>,
    pub module_dims: Vec<usize>,
    pub classical_surjective: bool,
    pub gbt_verdict: String,
    /// False when `O(M)` was built on a truncation of an unstabilized hull.
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelChainReport {
    pub dims: Vec<usize>,
    pub final_dim: usize,
    pub final_basis: Vec<String>,
    pub complete_family: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionReport {
    pub chain: Vec<String>,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module_dim: Option<usize>,
    /// Action matrices per basis element of `A`.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub action: BTreeMap<String, String>,
    /// `ψ^{ij}` (module action) and `α_ij` (defining system) by slot.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub psi: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub alpha: BTreeMap<String, String>,
    /// Ext¹ coordinates of the consecutive subquotients.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub induced_classes: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annihilation: Option<AnnihilationReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub order: usize,
    pub slot: (usize, usize),
    pub value: String,
    pub value_defining_system: String,
    pub cleared_by_top_adjustment: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnihilationReport {
    pub k_dim: usize,
    #[serde(flatten)]
    pub check: Annihilation,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub tool: ToolInfo,
    pub scenario: String,
    pub command: String,
    pub field: String,
    pub degree_cap: usize,
    pub modules: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ext1_dims: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hull: Option<HullReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observables: Option<ObservablesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burnside: Option<BurnsideReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standard_form: Option<StandardForm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_chain: Option<KernelChainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// A scenario with its exact objects and the lazily computed hull.
pub struct Session {
    pub scenario: Scenario,
    pub problem: Problem,
    pub conventions: Conventions,
    pub degree_cap: usize,
    pc: Option<ProCouple>,
}

impl Session {
    pub fn new(scenario: &Scenario, conventions: &Conventions, degree_cap: Option<usize>) -> Result<Self> {
        let mut scenario = conventions.apply(scenario)?;
        if let Some(cap) = degree_cap {
            if scenario.options.cochain_support_cap.is_none() {
                scenario.options.cochain_support_cap = Some(scenario.options.support_cap());
            }
            scenario.options.degree_cap = cap;
        }
        let problem = scenario.build()?;
        let degree_cap = scenario.options.degree_cap;
        Ok(Session { scenario, problem, conventions: conventions.clone(), degree_cap, pc: None })
    }

    pub fn hull_options(&self) -> HullOptions {
        HullOptions { degree_cap: self.degree_cap, check_cocycles: self.conventions.check_cocycles }
    }

    pub fn pro_couple(&mut self) -> Result<&ProCouple> {
        if self.pc.is_none() {
            let cx = Complex::new(&self.problem.algebra, &self.problem.family);
            let ext = cx.ext1_basis()?;
            self.pc = Some(run_hull_with_basis(cx, ext, self.hull_options())?);
        }
        Ok(self.pc.as_ref().unwrap())
    }

    fn empty_report(&self, command: Command) -> Report {
        Report {
            schema: REPORT_SCHEMA.into(),
            tool: ToolInfo { name: "nchull".into(), version: VERSION.into(), conventions: self.conventions.clone() },
            scenario: self.scenario.name.clone(),
            command: command.name().into(),
            field: self.scenario.field.to_string(),
            degree_cap: self.degree_cap,
            modules: self.problem.family.iter().map(|m| m.name.clone()).collect(),
            ext1_dims: None,
            hull: None,
            observables: None,
            burnside: None,
            standard_form: None,
            closure: None,
            kernel_chain: None,
            extension: None,
        }
    }

    pub fn run(&mut self, command: Command, cochains: Option<&CochainFile>) -> Result<Report> {
        let mut report = self.empty_report(command);
        let complete = self.scenario.options.complete_family;
        let opts = self.hull_options();
        let sign = self.conventions.massey_sign;
        let pc = self.pro_couple()?;
        report.ext1_dims = Some(pc.ext.dims());
        match command {
            Command::Ext => {}
            Command::Hull => report.hull = Some(hull_report(pc)),
            Command::Observables | Command::Burnside | Command::StandardForm => {
                let obs = assemble(pc);
                let eta = versal_morphism(pc, &obs)?;
                report.observables = Some(observables_report(pc, &obs, &eta));
                match command {
                    Command::Burnside => report.burnside = Some(burnside_report(pc, &obs, &eta)),
                    Command::StandardForm => report.standard_form = Some(standard_form(pc, &obs, &eta)),
                    _ => {}
                }
            }
            Command::Closure => {
                let obs = assemble(pc);
                report.closure = Some(closure_check(pc, &obs, opts)?);
            }
            Command::KernelChain => report.kernel_chain = Some(kernel_chain_report(pc, complete)),
            Command::ExtensionBuild | Command::ExtensionCheck => {
                let file = cochains.ok_or_else(|| Error::Schema("extension commands need a cochain file".into()))?;
                report.extension = Some(extension_report(pc, command, file, sign)?);
            }
        }
        Ok(report)
    }
}

pub fn hull_report(pc: &ProCouple) -> HullReport {
    let names: Vec<String> = pc.registry.classes().iter().map(|c| c.name.clone()).collect();
    HullReport {
        arrows: pc.quiver.arrows.iter().map(|a| HullArrow { name: a.name.clone(), src: a.src + 1, dst: a.dst + 1 }).collect(),
        relations: pc
            .relations
            .iter()
            .map(|r| RelationReport {
                name: r.name.clone(),
                class: names[r.class].clone(),
                src: r.src + 1,
                dst: r.dst + 1,
                poly: pc.render_relation(&r.poly),
                history: r.history.iter().map(|(l, p)| (*l, pc.render_relation(p))).collect(),
            })
            .collect(),
        obstruction_classes: names,
        graded_dims: pc.graded_dims(),
        block_dims: pc.block_dims(),
        dim: pc.dim(),
        top_degree: pc.top_degree(),
        stabilized: pc.stabilized,
    }
}

pub fn gbt_verdict(ker: usize, im: usize, dim_o: usize) -> &'static str {
    match (ker == 0, im == dim_o) {
        (true, true) => "isomorphism",
        (true, false) => "injective",
        (false, true) => "surjective",
        (false, false) => "neither",
    }
}

fn observables_report(pc: &ProCouple, obs: &crate::observables::ObservablesAlg, eta: &crate::observables::VersalMorphism) -> ObservablesReport {
    let alg = pc.complex.algebra();
    let family = pc.complex.family();
    let sum_sq: usize = family.iter().map(|m| m.dim() * m.dim()).sum();
    ObservablesReport {
        dim_a: alg.dim(),
        dim_o: obs.dim(),
        ker_dim: eta.kernel.dim(),
        im_dim: eta.image.dim(),
        end_dims: family.iter().map(|m| endomorphisms(alg, m).len()).collect(),
        module_dims: family.iter().map(|m| m.dim()).collect(),
        classical_surjective: family_image_dim(alg, family) == sum_sq,
        gbt_verdict: gbt_verdict(eta.kernel.dim(), eta.image.dim(), obs.dim()).into(),
        exact: obs.exact,
    }
}

pub fn final_kernel(pc: &ProCouple) -> Subspace {
    kernel_chain(pc).pop().expect("the chain has at least one term")
}

fn kernel_chain_report(pc: &ProCouple, complete_family: bool) -> KernelChainReport {
    let chain = kernel_chain(pc);
    let last = chain.last().expect("nonempty");
    let alg = pc.complex.algebra();
    KernelChainReport {
        dims: chain.iter().map(Subspace::dim).collect(),
        final_dim: last.dim(),
        final_basis: last.basis().iter().map(|v| alg.render(v)).collect(),
        complete_family,
        exact: pc.stabilized,
    }
}

fn render_cochain(pc: &ProCouple, psi: &Cochain1) -> String {
    let alg = pc.complex.algebra();
    if psi.is_zero() {
        return "0".into();
    }
    psi.values
        .iter()
        .map(|(&k, m)| format!("{} -> {}", alg.names()[k], render_matrix(m)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn render_matrix(m: &Matrix) -> String {
    let rows: Vec<String> =
        m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")).collect();
    format!("[{}]", rows.join("; "))
}

/// `Σ c_s s` with the registry's class names.
pub fn render_classes(reg: &Registry, coords: &[(usize, Scalar)]) -> String {
    if coords.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (s, c)) in coords.iter().enumerate() {
        let name = &reg.classes()[*s].name;
        let neg = c.is_negative();
        let abs = if neg { -c.clone() } else { c.clone() };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&format!("{abs}*"));
        }
        out.push_str(name);
    }
    out
}

fn annihilation_report(pc: &ProCouple, e: &IteratedExtension) -> Result<AnnihilationReport> {
    let k = final_kernel(pc);
    let check = annihilation_check(pc.complex.algebra(), &pc.complex, e, &k)?;
    Ok(AnnihilationReport { k_dim: k.dim(), check })
}

fn describe_extension(pc: &ProCouple, names: &[String], e: &IteratedExtension, rep: &mut ExtensionReport) -> Result<()> {
    let cx = &pc.complex;
    let alg = cx.algebra();
    rep.module_dim = Some(e.module.dim());
    rep.action = alg.names().iter().zip(e.module.actions()).map(|(n, m)| (n.clone(), render_matrix(m))).collect();
    let sys = e.spec.to_defining_system(cx);
    for ((i, j), a) in &sys.alpha {
        let key = format!("{},{}", i + 1, j + 1);
        let psi = e.spec.psi.get(&(*i, *j)).cloned().unwrap_or_else(|| cx.zero1(a.src, a.dst));
        rep.psi.insert(key.clone(), render_cochain(pc, &psi));
        rep.alpha.insert(key, render_cochain(pc, a));
    }
    rep.induced_classes = (0..names.len().saturating_sub(1))
        .map(|i| Ok(ext_class(cx, &pc.ext, &e.induced_cochain(cx, i))?.iter().map(ToString::to_string).collect()))
        .collect::<Result<_>>()?;
    rep.annihilation = Some(annihilation_report(pc, e)?);
    Ok(())
}

fn extension_report(pc: &ProCouple, command: Command, file: &CochainFile, sign: MasseySign) -> Result<ExtensionReport> {
    let cx = &pc.complex;
    let (chain, slots) = file.resolve(pc)?;
    let mut rep = ExtensionReport {
        chain: file.chain.clone(),
        outcome: String::new(),
        obstruction: None,
        module_dim: None,
        action: BTreeMap::new(),
        psi: BTreeMap::new(),
        alpha: BTreeMap::new(),
        induced_classes: Vec::new(),
        annihilation: None,
    };
    match command {
        Command::ExtensionBuild => {
            let spec = CofiltrationSpec { chain, psi: slots };
            let e = build(cx, &spec)?;
            rep.outcome = "built".into();
            describe_extension(pc, &file.chain, &e, &mut rep)?;
        }
        _ => {
            let r = chain.len();
            let mut consecutive = Vec::with_capacity(r.saturating_sub(1));
            for i in 0..r.saturating_sub(1) {
                consecutive.push(
                    slots
                        .get(&(i, i + 1))
                        .cloned()
                        .ok_or_else(|| Error::Schema(format!("missing consecutive slot ({}, {})", i + 1, i + 2)))?,
                );
            }
            if slots.keys().any(|(i, j)| j - i > 1) {
                return Err(Error::Schema("a vanishing check takes only consecutive slots".into()));
            }
            let mut reg = pc.registry.clone();
            match massey_vanishing_check(cx, &mut reg, consecutive)? {
                Vanishing::Constructible { extension, .. } => {
                    rep.outcome = "constructible".into();
                    describe_extension(pc, &file.chain, &extension, &mut rep)?;
                }
                Vanishing::Obstructed { order, slot, classes, lifting_classes, cleared_by_top_adjustment } => {
                    rep.outcome = "obstructed".into();
                    let value = match sign {
                        MasseySign::LiftingAction => &lifting_classes,
                        MasseySign::DefiningSystem => &classes,
                    };
                    rep.obstruction = Some(ObstructionReport {
                        order,
                        slot: (slot.0 + 1, slot.1 + 1),
                        value: render_classes(&reg, value),
                        value_defining_system: render_classes(&reg, &classes),
                        cleared_by_top_adjustment,
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// Runs one command on a scenario.
pub fn run(scenario: &Scenario, command: Command, conventions: &Conventions, degree_cap: Option<usize>, cochains: Option<&CochainFile>) -> Result<Report> {
    Session::new(scenario, conventions, degree_cap)?.run(command, cochains)
}
