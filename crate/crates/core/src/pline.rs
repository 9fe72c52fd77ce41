//! The projective line `{∞} ∪ GF(q)` and the semilinear fractional maps
//! acting on it, together with the small set of group algorithms the rest of
//! the crate needs: closure, conjugation, normalizers and transitivity.
//!
//! A map `m = (a, b, c, d; j)` acts as `z ↦ (a z^σ + b) / (c z^σ + d)` with
//! `σ = Frob^j`, so Frobenius is applied first. Coefficient quadruples are
//! kept normalized: the first nonzero entry of `(a, b, c, d)` is 1.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::classifier::{OuterError, OuterSpec, Preset};
use crate::gf::{Field, FieldElem};

/// Default cap on the number of elements a closure may materialize.
pub const DEFAULT_ELEMENT_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlineError {
    #[error("closure exceeded the element budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("singular coefficients: ad - bc = 0")]
    Singular,
    #[error("subgroup is not contained in the ambient group")]
    NotContained,
    #[error("transitivity degree must be 1, 2 or 3 (got {0})")]
    BadDegree(usize),
    #[error("cannot parse map {0:?}; expected \"a,b,c,d;j\"")]
    Parse(String),
    #[error(transparent)]
    Outer(#[from] OuterError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PPoint {
    Infinity,
    Finite(FieldElem),
}

/// An element of PΓL(2,q) in normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemilinearMap {
    a: FieldElem,
    b: FieldElem,
    c: FieldElem,
    d: FieldElem,
    j: u8,
}

impl SemilinearMap {
    pub fn coefficients(&self) -> [FieldElem; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn frobenius_exponent(&self) -> u32 {
        self.j as u32
    }

    pub fn is_linear(&self) -> bool {
        self.j == 0
    }
}

/// Canonical text form `a,b,c,d;j` with integer encodings.
impl fmt::Display for SemilinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{};{}", self.a, self.b, self.c, self.d, self.j)
    }
}

/// Parsed but not yet validated against a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapText {
    pub coeffs: [u64; 4],
    pub j: u32,
}

impl FromStr for MapText {
    type Err = PlineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PlineError::Parse(s.to_string());
        let (lin, j) = s.split_once(';').ok_or_else(err)?;
        let parts: Vec<u64> = lin
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        let coeffs: [u64; 4] = parts.try_into().map_err(|_| err())?;
        let j = j.trim().parse().map_err(|_| err())?;
        Ok(MapText { coeffs, j })
    }
}

/// Arithmetic context for maps over one field.
#[derive(Debug, Clone)]
pub struct ProjectiveLine {
    field: Arc<Field>,
}

impl ProjectiveLine {
    pub fn new(field: Arc<Field>) -> Self {
        ProjectiveLine { field }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    /// `∞` first, then finite points in encoding order.
    pub fn points(&self) -> Vec<PPoint> {
        std::iter::once(PPoint::Infinity)
            .chain(self.field.elements().map(PPoint::Finite))
            .collect()
    }

    pub fn map(
        &self,
        a: FieldElem,
        b: FieldElem,
        c: FieldElem,
        d: FieldElem,
        j: u32,
    ) -> Result<SemilinearMap, PlineError> {
        let k = &self.field;
        if k.sub(k.mul(a, d), k.mul(b, c)).is_zero() {
            return Err(PlineError::Singular);
        }
        Ok(self.normalize(a, b, c, d, j % k.degree()))
    }

    /// Shorthand for `t_{a,b,c,d}` with `j = 0`.
    pub fn t(&self, a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Result<SemilinearMap, PlineError> {
        self.map(a, b, c, d, 0)
    }

    pub fn from_text(&self, text: &MapText) -> Result<SemilinearMap, PlineError> {
        let k = &self.field;
        let [a, b, c, d] = text.coeffs;
        let e = |x: u64| k.elem(x).map_err(|_| PlineError::Parse(format!("{x}")));
        self.map(e(a)?, e(b)?, e(c)?, e(d)?, text.j)
    }

    pub fn parse(&self, s: &str) -> Result<SemilinearMap, PlineError> {
        self.from_text(&s.parse()?)
    }

    fn normalize(&self, a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem, j: u32) -> SemilinearMap {
        let k = &self.field;
        let lead = [a, b, c, d].into_iter().find(|x| !x.is_zero()).expect("nonsingular");
        let s = if lead == FieldElem::ONE { lead } else { k.inv_nonzero(lead) };
        if s == FieldElem::ONE {
            return SemilinearMap { a, b, c, d, j: j as u8 };
        }
        SemilinearMap {
            a: k.mul(a, s),
            b: k.mul(b, s),
            c: k.mul(c, s),
            d: k.mul(d, s),
            j: j as u8,
        }
    }

    pub fn identity(&self) -> SemilinearMap {
        SemilinearMap { a: FieldElem::ONE, b: FieldElem::ZERO, c: FieldElem::ZERO, d: FieldElem::ONE, j: 0 }
    }

    /// `δ = t_{ξ,0,0,1}`.
    pub fn delta(&self) -> SemilinearMap {
        let z = FieldElem::ZERO;
        self.normalize(self.field.primitive(), z, z, FieldElem::ONE, 0)
    }

    /// `φ: z ↦ z^p`.
    pub fn phi(&self) -> SemilinearMap {
        SemilinearMap { j: 1 % self.field.degree() as u8, ..self.identity() }
    }

    pub fn det(&self, m: &SemilinearMap) -> FieldElem {
        let k = &self.field;
        k.sub(k.mul(m.a, m.d), k.mul(m.b, m.c))
    }

    pub fn apply(&self, m: &SemilinearMap, z: PPoint) -> PPoint {
        let k = &self.field;
        match z {
            PPoint::Infinity => {
                if m.c.is_zero() {
                    PPoint::Infinity
                } else {
                    PPoint::Finite(k.mul(m.a, k.inv_nonzero(m.c)))
                }
            }
            PPoint::Finite(w) => {
                let w = k.frobenius(w, m.j as i64);
                let den = k.add(k.mul(m.c, w), m.d);
                if den.is_zero() {
                    PPoint::Infinity
                } else {
                    let num = k.add(k.mul(m.a, w), m.b);
                    PPoint::Finite(k.mul(num, k.inv_nonzero(den)))
                }
            }
        }
    }

    /// `m1 ∘ m2`: the linear part of `m2` is twisted by the Frobenius of `m1`.
    #[inline]
    pub fn compose(&self, m1: &SemilinearMap, m2: &SemilinearMap) -> SemilinearMap {
        let k = &self.field;
        let s = m1.j as i64;
        let (a2, b2, c2, d2) = if s == 0 {
            (m2.a, m2.b, m2.c, m2.d)
        } else {
            (k.frobenius(m2.a, s), k.frobenius(m2.b, s), k.frobenius(m2.c, s), k.frobenius(m2.d, s))
        };
        let a = k.add(k.mul(m1.a, a2), k.mul(m1.b, c2));
        let b = k.add(k.mul(m1.a, b2), k.mul(m1.b, d2));
        let c = k.add(k.mul(m1.c, a2), k.mul(m1.d, c2));
        let d = k.add(k.mul(m1.c, b2), k.mul(m1.d, d2));
        let f = k.degree() as u8;
        let j = (m1.j + m2.j) % f;
        self.normalize(a, b, c, d, j as u32)
    }

    pub fn invert(&self, m: &SemilinearMap) -> SemilinearMap {
        let k = &self.field;
        let back = -(m.j as i64);
        let tw = |x: FieldElem| k.frobenius(x, back);
        let j = (k.degree() - m.j as u32) % k.degree();
        self.normalize(tw(m.d), tw(k.neg(m.b)), tw(k.neg(m.c)), tw(m.a), j)
    }

    /// `g⁻¹ x g`.
    pub fn conjugate_elem(&self, x: &SemilinearMap, g: &SemilinearMap) -> SemilinearMap {
        self.compose(&self.invert(g), &self.compose(x, g))
    }

    pub fn power(&self, m: &SemilinearMap, n: u64) -> SemilinearMap {
        let mut acc = self.identity();
        let mut base = *m;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.compose(&acc, &base);
            }
            base = self.compose(&base, &base);
            n >>= 1;
        }
        acc
    }

    pub fn in_psl(&self, m: &SemilinearMap) -> bool {
        if m.j != 0 {
            return false;
        }
        self.field.p() == 2 || self.field.is_square(self.det(m)).unwrap_or(true)
    }

    pub fn element_order(&self, m: &SemilinearMap) -> u64 {
        let id = self.identity();
        let mut cur = *m;
        let mut n = 1;
        while cur != id {
            cur = self.compose(&cur, m);
            n += 1;
        }
        n
    }

    /// The standard generators of PSL(2,q).
    pub fn psl_generators(&self) -> Vec<SemilinearMap> {
        let k = &self.field;
        let (z, o) = (FieldElem::ZERO, FieldElem::ONE);
        let diag = if k.p() == 2 { k.primitive() } else { k.xi_pow(2) };
        vec![
            self.normalize(diag, z, z, o, 0),
            self.normalize(o, o, z, o, 0),
            self.normalize(z, o, k.neg(o), z, 0),
        ]
    }

    /// The coset representative `δ^i φ^j` of an outer automorphism class.
    pub fn outer_rep(&self, i: u32, j: u32) -> SemilinearMap {
        let mut m = self.identity();
        for _ in 0..i {
            m = self.compose(&m, &self.delta());
        }
        for _ in 0..j {
            m = self.compose(&m, &self.phi());
        }
        m
    }
}

/// Identifies `G` with `PSL(2,q) ≤ G ≤ PΓL(2,q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupId {
    pub field: Arc<Field>,
    pub outer: OuterSpec,
}

impl GroupId {
    pub fn new(field: Arc<Field>, outer: OuterSpec) -> Self {
        GroupId { field, outer }
    }

    pub fn preset(field: Arc<Field>, preset: Preset) -> Result<Self, PlineError> {
        let q = field.order() as u64;
        let outer = OuterSpec::preset(q, preset)?;
        Ok(GroupId { field, outer })
    }

    pub fn psl_order(&self) -> u64 {
        let q = self.field.order() as u64;
        let d = if q.is_multiple_of(2) { 1 } else { 2 };
        q * (q * q - 1) / d
    }

    pub fn order(&self) -> u64 {
        self.psl_order() * self.outer.order() as u64
    }
}

/// A materialized subgroup of PΓL(2,q).
#[derive(Debug, Clone)]
pub struct SubgroupInstance {
    ambient: GroupId,
    generators: Vec<SemilinearMap>,
    elements: Vec<SemilinearMap>,
    members: FxHashSet<SemilinearMap>,
}

impl PartialEq for SubgroupInstance {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for SubgroupInstance {}

impl SubgroupInstance {
    fn from_parts(ambient: GroupId, generators: Vec<SemilinearMap>, mut elements: Vec<SemilinearMap>) -> Self {
        elements.sort_unstable();
        let members = elements.iter().copied().collect();
        SubgroupInstance { ambient, generators, elements, members }
    }

    /// Wraps an element set already known to be a subgroup, choosing a
    /// small generating set greedily in canonical order.
    pub fn from_elements(
        line: &ProjectiveLine,
        ambient: GroupId,
        mut elements: Vec<SemilinearMap>,
    ) -> Result<Self, PlineError> {
        elements.sort_unstable();
        elements.dedup();
        let target = elements.len();
        let mut gens = Vec::new();
        let mut cur: FxHashSet<SemilinearMap> = std::iter::once(line.identity()).collect();
        for e in &elements {
            if cur.len() == target {
                break;
            }
            if !cur.contains(e) {
                gens.push(*e);
                cur = bfs(line, &gens, target)?.into_iter().collect();
            }
        }
        if cur.len() != target {
            return Err(PlineError::BudgetExceeded { budget: target });
        }
        Ok(Self::from_parts(ambient, gens, elements))
    }

    pub fn ambient(&self) -> &GroupId {
        &self.ambient
    }

    pub fn with_ambient(mut self, ambient: GroupId) -> Self {
        self.ambient = ambient;
        self
    }

    pub fn generators(&self) -> &[SemilinearMap] {
        &self.generators
    }

    /// Canonically sorted.
    pub fn elements(&self) -> &[SemilinearMap] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &SemilinearMap) -> bool {
        self.members.contains(m)
    }

    pub fn is_subgroup_of(&self, other: &SubgroupInstance) -> bool {
        self.order() <= other.order() && self.elements.iter().all(|e| other.contains(e))
    }

    /// Elements of `self` that lie in PSL(2,q).
    pub fn intersect_psl(&self, line: &ProjectiveLine) -> Result<SubgroupInstance, PlineError> {
        let els: Vec<_> = self.elements.iter().copied().filter(|m| line.in_psl(m)).collect();
        let t = GroupId::preset(line.field().clone(), Preset::Psl)?;
        SubgroupInstance::from_elements(line, t, els)
    }
}

fn bfs(line: &ProjectiveLine, gens: &[SemilinearMap], budget: usize) -> Result<Vec<SemilinearMap>, PlineError> {
    let id = line.identity();
    let mut seen: FxHashSet<SemilinearMap> = FxHashSet::default();
    seen.insert(id);
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        let e = out[i];
        for g in gens {
            let h = line.compose(&e, g);
            if seen.insert(h) {
                if out.len() >= budget {
                    return Err(PlineError::BudgetExceeded { budget });
                }
                out.push(h);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Size of `⟨gens⟩`, or `None` as soon as it would exceed `limit`.
pub fn closure_size_at_most(line: &ProjectiveLine, gens: &[SemilinearMap], limit: usize) -> Option<usize> {
    bfs(line, gens, limit).ok().map(|v| v.len())
}

fn full_group_id(line: &ProjectiveLine) -> GroupId {
    GroupId::preset(line.field().clone(), Preset::PGammaL).expect("PΓL preset is always valid")
}

/// Breadth-first product closure of `gens`, tagged with PΓL(2,q) as ambient.
pub fn closure(line: &ProjectiveLine, gens: &[SemilinearMap], budget: usize) -> Result<SubgroupInstance, PlineError> {
    let elements = bfs(line, gens, budget)?;
    Ok(SubgroupInstance::from_parts(full_group_id(line), gens.to_vec(), elements))
}

/// The group `T ⋅ {δ^i φ^j : (i, j) ∈ H}` named by `id`.
pub fn build_group(id: &GroupId, budget: usize) -> Result<SubgroupInstance, PlineError> {
    let line = ProjectiveLine::new(id.field.clone());
    let mut gens = line.psl_generators();
    for &(i, j) in id.outer.generators() {
        gens.push(line.outer_rep(i, j));
    }
    let elements = bfs(&line, &gens, budget)?;
    debug_assert_eq!(elements.len() as u64, id.order());
    Ok(SubgroupInstance::from_parts(id.clone(), gens, elements))
}

/// `s^g = {g⁻¹ x g : x ∈ s}`.
pub fn conjugate(line: &ProjectiveLine, s: &SubgroupInstance, g: &SemilinearMap) -> SubgroupInstance {
    let gi = line.invert(g);
    let conj = |x: &SemilinearMap| line.compose(&gi, &line.compose(x, g));
    let gens = s.generators.iter().map(conj).collect();
    let elements = s.elements.iter().map(conj).collect();
    SubgroupInstance::from_parts(s.ambient.clone(), gens, elements)
}

/// Elements of `ambient` normalizing `s`.
pub fn normalizer(
    line: &ProjectiveLine,
    s: &SubgroupInstance,
    ambient: &SubgroupInstance,
) -> Result<SubgroupInstance, PlineError> {
    if !s.is_subgroup_of(ambient) {
        return Err(PlineError::NotContained);
    }
    let els: Vec<SemilinearMap> = ambient
        .elements
        .iter()
        .copied()
        .filter(|g| {
            let gi = line.invert(g);
            s.generators.iter().all(|x| s.contains(&line.compose(&gi, &line.compose(x, g))))
        })
        .collect();
    SubgroupInstance::from_elements(line, ambient.ambient.clone(), els)
}

/// Whether `s` acts transitively on ordered `k`-tuples of distinct points,
/// tested on the orbit of `(∞, 0, 1)` truncated to length `k`.
pub fn is_k_transitive(line: &ProjectiveLine, s: &SubgroupInstance, k: usize) -> Result<bool, PlineError> {
    if !(1..=3).contains(&k) {
        return Err(PlineError::BadDegree(k));
    }
    let base = [PPoint::Infinity, PPoint::Finite(FieldElem::ZERO), PPoint::Finite(FieldElem::ONE)];
    let q = line.q() as usize;
    let target = [q + 1, (q + 1) * q, (q + 1) * q * (q - 1)][k - 1];
    let mut orbit: FxHashSet<[PPoint; 3]> = FxHashSet::default();
    for m in &s.elements {
        let mut img = [PPoint::Infinity; 3];
        for (slot, z) in img.iter_mut().zip(&base[..k]) {
            *slot = line.apply(m, *z);
        }
        orbit.insert(img);
    }
    Ok(orbit.len() == target)
}
