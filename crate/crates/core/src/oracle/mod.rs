//! Brute-force checks of the classifier against explicit subgroups.

mod lattice;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

pub use lattice::{Lattice, SubgroupClassInfo, DEFAULT_LATTICE_BUDGET};

use crate::classifier::{self, ClassifyError, MaxSubgroupDescriptor, OuterError, OuterSpec, Preset};
use crate::families::{FamilyError, FamilyTag, SubgroupFactory};
use crate::gf::{Field, FieldError};
use crate::pline::{self, GroupId, PlineError, ProjectiveLine, SemilinearMap, SubgroupInstance};
use crate::{arith, pline::DEFAULT_ELEMENT_BUDGET};
use rustc_hash::FxHashMap;

/// Default cap on `|G|` for maximality checks.
pub const DEFAULT_MAXIMALITY_BUDGET: usize = 300_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("subgroup is not a proper subgroup of the ambient group")]
    NotProper,
    #[error("lattice enumeration needs |G| <= {budget}, got {order}")]
    LatticeBudget { order: usize, budget: usize },
    #[error("maximality check needs |G| <= {budget}, got {order}")]
    MaximalityBudget { order: usize, budget: usize },
    #[error("q = {0} is not a prime power >= 4")]
    BadField(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Outer(#[from] OuterError),
    #[error(transparent)]
    Pline(#[from] PlineError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

impl OracleError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            OracleError::LatticeBudget { .. }
                | OracleError::MaximalityBudget { .. }
                | OracleError::Pline(PlineError::BudgetExceeded { .. })
                | OracleError::Family(FamilyError::Pline(PlineError::BudgetExceeded { .. }))
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Orders,
    Maximality,
    Completeness,
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "orders" => Ok(Level::Orders),
            "maximality" => Ok(Level::Maximality),
            "completeness" => Ok(Level::Completeness),
            _ => Err(format!("unknown level {s:?}; expected orders, maximality or completeness")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub elements: usize,
    pub maximality: usize,
    pub lattice: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            elements: DEFAULT_ELEMENT_BUDGET,
            maximality: DEFAULT_MAXIMALITY_BUDGET,
            lattice: DEFAULT_LATTICE_BUDGET,
        }
    }
}

impl Budgets {
    /// Defaults, with the element budget taken from `PSL2MAX_BUDGET` if set.
    pub fn from_env() -> Self {
        let mut b = Budgets::default();
        if let Some(n) = std::env::var("PSL2MAX_BUDGET").ok().and_then(|v| v.trim().parse().ok()) {
            b.elements = n;
        }
        b
    }
}

/// Whether `m` is a maximal subgroup of `g`.
///
/// Each `x ∉ m` is tested by closing `m ∪ {x}` and stopping past `|g|/2`;
/// once `⟨m, x⟩ = g` the whole double coset `m x m` is skipped.
pub fn is_maximal(line: &ProjectiveLine, m: &SubgroupInstance, g: &SubgroupInstance) -> Result<bool, OracleError> {
    if m.order() >= g.order() || !m.is_subgroup_of(g) {
        return Err(OracleError::NotProper);
    }
    let half = g.order() / 2;
    let mut covered: rustc_hash::FxHashSet<SemilinearMap> = m.elements().iter().copied().collect();
    let mut gens = m.generators().to_vec();
    gens.push(line.identity());
    let last = gens.len() - 1;
    for x in g.elements() {
        if covered.contains(x) {
            continue;
        }
        gens[last] = *x;
        if pline::closure_size_at_most(line, &gens, half).is_some() {
            return Ok(false);
        }
        for a in m.elements() {
            let ax = line.compose(a, x);
            for b in m.elements() {
                covered.insert(line.compose(&ax, b));
            }
        }
    }
    Ok(true)
}

/// Number of T- and G-classes in the Aut(T)-orbit of a subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCounts {
    pub t_classes: usize,
    pub g_classes: usize,
}

struct Orbit {
    members: Vec<SubgroupInstance>,
    index: FxHashMap<Vec<SemilinearMap>, usize>,
}

impl Orbit {
    fn of(line: &ProjectiveLine, s: &SubgroupInstance, gens: &[SemilinearMap]) -> Orbit {
        let mut orbit = Orbit { members: vec![s.clone()], index: FxHashMap::default() };
        orbit.index.insert(s.elements().to_vec(), 0);
        let mut i = 0;
        while i < orbit.members.len() {
            for g in gens {
                let c = pline::conjugate(line, &orbit.members[i], g);
                if !orbit.index.contains_key(c.elements()) {
                    orbit.index.insert(c.elements().to_vec(), orbit.members.len());
                    orbit.members.push(c);
                }
            }
            i += 1;
        }
        orbit
    }

    fn components(&self, line: &ProjectiveLine, gens: &[SemilinearMap]) -> usize {
        let n = self.members.len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for g in gens {
                    let c = pline::conjugate(line, &self.members[i], g);
                    let j = self.index[c.elements()];
                    if comp[j] == usize::MAX {
                        comp[j] = count;
                        stack.push(j);
                    }
                }
            }
            count += 1;
        }
        count
    }
}

fn aut_generators(line: &ProjectiveLine) -> Vec<SemilinearMap> {
    let mut gens = line.psl_generators();
    gens.push(line.delta());
    gens.push(line.phi());
    gens
}

/// Splits the Aut(T)-conjugacy class of `m0` into `t`- and `g`-classes.
pub fn class_count(
    line: &ProjectiveLine,
    m0: &SubgroupInstance,
    t: &SubgroupInstance,
    g: &SubgroupInstance,
) -> Result<ClassCounts, OracleError> {
    if !m0.is_subgroup_of(t) || !t.is_subgroup_of(g) {
        return Err(OracleError::Pline(PlineError::NotContained));
    }
    let orbit = Orbit::of(line, m0, &aut_generators(line));
    Ok(ClassCounts {
        t_classes: orbit.components(line, t.generators()),
        g_classes: orbit.components(line, g.generators()),
    })
}

/// Whether some element of `g` conjugates `m0a` onto `m0b`.
pub fn fusion_check(
    line: &ProjectiveLine,
    m0a: &SubgroupInstance,
    m0b: &SubgroupInstance,
    t: &SubgroupInstance,
    g: &SubgroupInstance,
) -> Result<bool, OracleError> {
    if !m0a.is_subgroup_of(t) || !m0b.is_subgroup_of(t) || !t.is_subgroup_of(g) {
        return Err(OracleError::Pline(PlineError::NotContained));
    }
    Ok(m0a.order() == m0b.order() && Orbit::of(line, m0a, g.generators()).index.contains_key(m0b.elements()))
}

/// All subgroups of `g`.
pub fn all_subgroups(
    line: &ProjectiveLine,
    g: &SubgroupInstance,
    budget: usize,
) -> Result<Vec<SubgroupInstance>, OracleError> {
    Ok(Lattice::build(line, g, budget)?.all_subgroups(line, g))
}

/// Class representatives of the maximal subgroups of `g`, with class sizes.
pub fn maximal_subgroups_bruteforce(
    line: &ProjectiveLine,
    g: &SubgroupInstance,
    budget: usize,
) -> Result<Vec<(SubgroupInstance, usize)>, OracleError> {
    Ok(Lattice::build(line, g, budget)?.maximal_classes(line, g))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub descriptor: String,
    pub predicted: Value,
    pub observed: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub q: u64,
    pub outer: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip)]
    pub budget_exhausted: bool,
}

impl Report {
    fn push(&mut self, descriptor: impl Into<String>, predicted: Value, observed: Value) -> bool {
        let pass = predicted == observed;
        self.checks.push(Check { descriptor: descriptor.into(), predicted, observed, pass });
        pass
    }

    fn budget(&mut self, descriptor: impl Into<String>, err: &OracleError) {
        self.budget_exhausted = true;
        self.checks.push(Check {
            descriptor: descriptor.into(),
            predicted: Value::Null,
            observed: json!({ "budget_exhausted": err.to_string() }),
            pass: false,
        });
    }

    fn finish(mut self) -> Report {
        self.pass = !self.checks.is_empty() && self.checks.iter().all(|c| c.pass);
        self
    }
}

fn descriptor_label(d: &MaxSubgroupDescriptor) -> String {
    let mut s = d.family.to_string();
    if let Some(q0) = d.q0 {
        s += &format!(" q0={q0}");
    }
    if let Some(st) = &d.structure {
        s += &format!(" {st}");
    }
    s
}

/// Families that yield maximal subgroups of `T` or are dihedral, but are
/// predicted not to yield a maximal subgroup of `T ⋅ h`.
pub fn excluded_families(q: u64, h: &OuterSpec) -> Result<Vec<FamilyTag>, OracleError> {
    let (_, f) = arith::prime_power(q).ok_or(OracleError::BadField(q))?;
    let listed: Vec<FamilyTag> = classifier::classify(q, h)?.iter().map(|d| d.family).collect();
    let trivial = OuterSpec::preset(q, Preset::Psl)?;
    let mut cands: Vec<FamilyTag> = classifier::classify(q, &trivial)?.iter().map(|d| d.family).collect();
    cands.extend([FamilyTag::DihedralMinus, FamilyTag::DihedralPlus]);
    if f == 1 && FamilyTag::A4.exists_in_psl(q) {
        cands.push(FamilyTag::A4);
    }
    let mut out: Vec<FamilyTag> = cands.into_iter().filter(|t| !listed.contains(t)).collect();
    out.sort_by_key(|t| t.to_string());
    out.dedup();
    Ok(out)
}

/// Whether some maximal subgroup `M` of `g` has `M ∩ t = m0`.
fn yields_maximal(
    line: &ProjectiveLine,
    m0: &SubgroupInstance,
    g: &SubgroupInstance,
) -> Result<bool, OracleError> {
    let m = pline::normalizer(line, m0, g)?;
    if m.order() == g.order() {
        return Ok(false);
    }
    let mt = m.intersect_psl(line)?;
    if mt != *m0 {
        return Ok(false);
    }
    is_maximal(line, &m, g)
}

/// PSL(2,q0) inside the subfield group PGL(2,q0).
fn psl_subfield(
    line: &ProjectiveLine,
    pgl0: &SubgroupInstance,
    q0: u64,
) -> Result<SubgroupInstance, OracleError> {
    let k = line.field();
    let e = (q0 - 1) / 2;
    let els = pgl0.elements().iter().copied().filter(|m| k.pow(line.det(m), e) == k.one()).collect();
    Ok(SubgroupInstance::from_elements(line, pgl0.ambient().clone(), els)?)
}

/// Compares `classify(q, h)` against explicit subgroups of `G = T ⋅ h`.
///
/// `Orders` checks `|M0|`, `|M|` and the class count of every row.
/// `Maximality` adds maximality of `M` in `G`, the novelty flag, and
/// checks that excluded families give no maximal subgroup. `Completeness`
/// enumerates all maximal subgroups of `G` and compares the multiset of
/// `(|M|, |M ∩ T|, novelty)` with the prediction.
pub fn verify_classification(q: u64, h: &OuterSpec, level: Level, budgets: &Budgets) -> Result<Report, OracleError> {
    let (p, f) = arith::prime_power(q).ok_or(OracleError::BadField(q))?;
    if q < 4 {
        return Err(OracleError::BadField(q));
    }
    h.check_matches(q)?;
    let descriptors = classifier::classify(q, h)?;
    let mut report = Report { q, outer: h.label(), checks: Vec::new(), pass: false, budget_exhausted: false };

    let field = Arc::new(Field::new(p, f)?);
    let factory = SubgroupFactory::new(field.clone(), budgets.elements);
    let line = factory.line();
    let gid = GroupId::new(field.clone(), h.clone());
    let groups = (|| -> Result<_, OracleError> {
        let g = pline::build_group(&gid, budgets.elements)?;
        let t = factory.psl()?.clone();
        Ok((g, t))
    })();
    let (g, t) = match groups {
        Ok(v) => v,
        Err(e) if e.is_budget() => {
            report.budget("group", &e);
            return Ok(report.finish());
        }
        Err(e) => return Err(e),
    };
    report.push("group-order", json!(gid.order()), json!(g.order()));

    let max_ok = g.order() <= budgets.maximality;
    for d in &descriptors {
        let label = descriptor_label(d);
        let m0 = match factory.build_m0(d.family) {
            Ok(m0) => m0,
            Err(e) => {
                let e = OracleError::from(e);
                if e.is_budget() {
                    report.budget(label, &e);
                    continue;
                }
                return Err(e);
            }
        };
        let m = pline::normalizer(line, &m0, &g)?;
        report.push(format!("{label}/m0_order"), json!(d.m0_order), json!(m0.order()));
        report.push(format!("{label}/m_order"), json!(d.m_order), json!(m.order()));
        let cc = class_count(line, &m0, &t, &g)?;
        report.push(format!("{label}/classes"), json!(d.class_count), json!(cc.g_classes));

        if level >= Level::Maximality {
            if !max_ok {
                let e = OracleError::MaximalityBudget { order: g.order(), budget: budgets.maximality };
                report.budget(format!("{label}/maximal"), &e);
                continue;
            }
            report.push(format!("{label}/maximal"), json!(true), json!(is_maximal(line, &m, &g)?));
            let novelty = m0.order() < t.order() && !is_maximal(line, &m0, &t)?;
            report.push(format!("{label}/novelty"), json!(d.novelty), json!(novelty));
            if let (FamilyTag::Subfield { r: 2, .. }, Some(q0), true) = (d.family, d.q0, p != 2) {
                let psl0 = psl_subfield(line, &m0, q0)?;
                let n = pline::normalizer(line, &psl0, &g)?;
                report.push(format!("{label}/normalizer-of-psl"), json!(d.m_order), json!(n.order()));
            }
        }
    }

    if level >= Level::Maximality && max_ok {
        for tag in excluded_families(q, h)? {
            let m0 = factory.build_m0(tag)?;
            let observed = yields_maximal(line, &m0, &g)?;
            report.push(format!("excluded {tag}/maximal"), json!(false), json!(observed));
        }
    }

    if level >= Level::Completeness {
        match Lattice::build(line, &g, budgets.lattice) {
            Ok(lat) => {
                let mut predicted: Vec<(u64, u64, bool)> = descriptors
                    .iter()
                    .flat_map(|d| std::iter::repeat_n((d.m_order, d.m0_order, d.novelty), d.class_count as usize))
                    .collect();
                predicted.sort_unstable();
                let observed = lat.maximal_profile(&t);
                report.push("completeness", json!(predicted), json!(observed));
            }
            Err(e) => report.budget("completeness", &e),
        }
    }
    Ok(report.finish())
}

/// `verify_classification` with the named preset.
pub fn verify_preset(q: u64, preset: Preset, level: Level, budgets: &Budgets) -> Result<Report, OracleError> {
    let h = OuterSpec::preset(q, preset)?;
    verify_classification(q, &h, level, budgets)
}
