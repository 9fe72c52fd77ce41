//! Explicit representatives of the maximal-subgroup families of PSL(2,q)
//! and their normalizers in an arbitrary `T ≤ G ≤ PΓL(2,q)`.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith;
use crate::classifier::Preset;
use crate::gf::Field;
use crate::pline::{
    self, closure_size_at_most, GroupId, PlineError, ProjectiveLine, SemilinearMap, SubgroupInstance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubfieldKind {
    Psl,
    Pgl,
}

/// One family of subgroups of T.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    PointStabilizer,
    /// Normalizer of the split torus, dihedral of order `2(q-1)/d`.
    DihedralMinus,
    /// Normalizer of the nonsplit torus, dihedral of order `2(q+1)/d`.
    DihedralPlus,
    Subfield { r: u32, kind: SubfieldKind },
    A5,
    A4,
    S4,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::PointStabilizer => write!(f, "point"),
            FamilyTag::DihedralMinus => write!(f, "dihedral-"),
            FamilyTag::DihedralPlus => write!(f, "dihedral+"),
            FamilyTag::Subfield { r, kind } => {
                let k = match kind {
                    SubfieldKind::Psl => "PSL",
                    SubfieldKind::Pgl => "PGL",
                };
                write!(f, "subfield(r={r},{k})")
            }
            FamilyTag::A4 => write!(f, "A4"),
            FamilyTag::S4 => write!(f, "S4"),
            FamilyTag::A5 => write!(f, "A5"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown family tag {0:?}")]
pub struct FamilyParseError(pub String);

impl FromStr for FamilyTag {
    type Err = FamilyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || FamilyParseError(s.to_string());
        Ok(match s {
            "point" => FamilyTag::PointStabilizer,
            "dihedral-" => FamilyTag::DihedralMinus,
            "dihedral+" => FamilyTag::DihedralPlus,
            "A4" => FamilyTag::A4,
            "S4" => FamilyTag::S4,
            "A5" => FamilyTag::A5,
            _ => {
                let body = s
                    .strip_prefix("subfield(r=")
                    .and_then(|b| b.strip_suffix(')'))
                    .ok_or_else(err)?;
                let (r, k) = body.split_once(',').ok_or_else(err)?;
                let r = r.parse().map_err(|_| err())?;
                let kind = match k {
                    "PSL" => SubfieldKind::Psl,
                    "PGL" => SubfieldKind::Pgl,
                    _ => return Err(err()),
                };
                FamilyTag::Subfield { r, kind }
            }
        })
    }
}

impl Serialize for FamilyTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FamilyTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("family {tag} does not occur in PSL(2,{q})")]
    Absent { tag: FamilyTag, q: u32 },
    #[error("family {tag} has a single T-class at q = {q}")]
    SingleClass { tag: FamilyTag, q: u32 },
    #[error("scan for {tag} exhausted at q = {q}")]
    ScanExhausted { tag: FamilyTag, q: u32 },
    #[error(transparent)]
    Pline(#[from] PlineError),
}

impl FamilyTag {
    /// The order of the representative in PSL(2,q), when the family exists there.
    pub fn t_order(&self, q: u64) -> Option<u64> {
        let (p, f) = arith::prime_power(q)?;
        let d = if p == 2 { 1 } else { 2 };
        Some(match *self {
            FamilyTag::PointStabilizer => q * (q - 1) / d,
            FamilyTag::DihedralMinus => 2 * (q - 1) / d,
            FamilyTag::DihedralPlus => 2 * (q + 1) / d,
            FamilyTag::Subfield { r, kind } => {
                if r == 0 || f % r != 0 {
                    return None;
                }
                let q0 = p.pow(f / r);
                let pgl = q0 * (q0 * q0 - 1);
                match kind {
                    SubfieldKind::Pgl => pgl,
                    SubfieldKind::Psl => pgl / if p == 2 { 1 } else { 2 },
                }
            }
            FamilyTag::A4 => 12,
            FamilyTag::S4 => 24,
            FamilyTag::A5 => 60,
        })
    }

    /// Whether PSL(2,q) contains a subgroup of this family.
    pub fn exists_in_psl(&self, q: u64) -> bool {
        let Some((p, f)) = arith::prime_power(q) else { return false };
        if q < 4 {
            return false;
        }
        match *self {
            FamilyTag::PointStabilizer | FamilyTag::DihedralMinus | FamilyTag::DihedralPlus => true,
            FamilyTag::Subfield { r, kind } => {
                if !arith::is_prime(r as u64) || f % r != 0 {
                    return false;
                }
                match kind {
                    SubfieldKind::Pgl => p == 2 || r == 2,
                    SubfieldKind::Psl => p != 2 && r % 2 == 1,
                }
            }
            FamilyTag::A4 => p != 2 || f % 2 == 0,
            FamilyTag::S4 => p != 2 && (q % 8 == 1 || q % 8 == 7),
            FamilyTag::A5 => p == 5 || (q * q) % 5 == 1,
        }
    }

    /// Whether T has two classes of this family, swapped by δ.
    pub fn has_two_t_classes(&self, q: u64) -> bool {
        let Some((p, f)) = arith::prime_power(q) else { return false };
        if p == 2 {
            return false;
        }
        match *self {
            FamilyTag::Subfield { r: 2, kind: SubfieldKind::Pgl } => f % 2 == 0,
            FamilyTag::S4 => f == 1 && (q % 8 == 1 || q % 8 == 7),
            FamilyTag::A5 => {
                (f == 1 && (q % 10 == 1 || q % 10 == 9)) || (f == 2 && (p % 10 == 3 || p % 10 == 7))
            }
            _ => false,
        }
    }
}

/// Builds family representatives over one field, caching PSL(2,q).
pub struct SubgroupFactory {
    line: ProjectiveLine,
    budget: usize,
    psl: OnceLock<SubgroupInstance>,
}

impl SubgroupFactory {
    pub fn new(field: Arc<Field>, budget: usize) -> Self {
        SubgroupFactory { line: ProjectiveLine::new(field), budget, psl: OnceLock::new() }
    }

    pub fn line(&self) -> &ProjectiveLine {
        &self.line
    }

    fn q(&self) -> u32 {
        self.line.q()
    }

    fn psl_id(&self) -> GroupId {
        GroupId::preset(self.line.field().clone(), Preset::Psl).expect("PSL preset")
    }

    pub fn psl(&self) -> Result<&SubgroupInstance, PlineError> {
        if let Some(t) = self.psl.get() {
            return Ok(t);
        }
        let t = pline::build_group(&self.psl_id(), self.budget)?;
        Ok(self.psl.get_or_init(|| t))
    }

    fn wrap(&self, gens: Vec<SemilinearMap>) -> Result<SubgroupInstance, PlineError> {
        Ok(pline::closure(&self.line, &gens, self.budget)?.with_ambient(self.psl_id()))
    }

    /// The canonical representative `M0 ≤ T` of a family.
    pub fn build_m0(&self, tag: FamilyTag) -> Result<SubgroupInstance, FamilyError> {
        let q = self.q();
        if !tag.exists_in_psl(q as u64) {
            return Err(FamilyError::Absent { tag, q });
        }
        let line = &self.line;
        let k = line.field().clone();
        let (z, o) = (k.zero(), k.one());
        let even = k.p() == 2;
        let torus = if even { k.primitive() } else { k.xi_pow(2) };
        let m0 = match tag {
            FamilyTag::PointStabilizer => {
                self.wrap(vec![line.t(o, o, z, o)?, line.t(torus, z, z, o)?])?
            }
            FamilyTag::DihedralMinus => {
                let w = if even || q % 4 == 1 {
                    line.t(z, o, o, z)?
                } else {
                    line.t(z, k.primitive(), o, z)?
                };
                self.wrap(vec![line.t(torus, z, z, o)?, w])?
            }
            FamilyTag::DihedralPlus => {
                let n = (q as u64 + 1) / if even { 1 } else { 2 };
                let t = self.psl()?;
                let x = *t
                    .elements()
                    .iter()
                    .find(|m| line.element_order(m) == n)
                    .ok_or(FamilyError::ScanExhausted { tag, q })?;
                let xi = line.invert(&x);
                let id = line.identity();
                let w = *t
                    .elements()
                    .iter()
                    .find(|w| {
                        **w != id && line.compose(w, w) == id && line.conjugate_elem(&x, w) == xi
                    })
                    .ok_or(FamilyError::ScanExhausted { tag, q })?;
                self.wrap(vec![x, w])?
            }
            FamilyTag::Subfield { r, kind } => {
                let sub: Vec<_> = k.elements().filter(|x| k.in_subfield(*x, r).unwrap_or(false)).collect();
                let mut els = Vec::new();
                for &a in &sub {
                    for &b in &sub {
                        for &c in &sub {
                            for &d in &sub {
                                let first = [a, b, c, d].into_iter().find(|x| !x.is_zero());
                                if first != Some(o) {
                                    continue;
                                }
                                let Ok(m) = line.t(a, b, c, d) else { continue };
                                let keep = match kind {
                                    SubfieldKind::Pgl => true,
                                    SubfieldKind::Psl => {
                                        // Squares of GF(q0) and of GF(q) agree when r is odd.
                                        line.in_psl(&m)
                                    }
                                };
                                if keep {
                                    els.push(m);
                                }
                            }
                        }
                    }
                }
                SubgroupInstance::from_elements(line, self.psl_id(), els)?
            }
            FamilyTag::A4 | FamilyTag::S4 | FamilyTag::A5 => {
                let (ox, oy, target) = match tag {
                    FamilyTag::A4 => (2, 3, 12),
                    FamilyTag::S4 => (4, 3, 24),
                    _ => (2, 3, 60),
                };
                self.scan_pair(tag, ox, oy, target)?
            }
        };
        Ok(m0)
    }

    /// First pair `(x, y)` in text order with the given element orders whose
    /// closure has exactly `target` elements.
    fn scan_pair(&self, tag: FamilyTag, ox: u64, oy: u64, target: usize) -> Result<SubgroupInstance, FamilyError> {
        let line = &self.line;
        let t = self.psl()?;
        let mut by_text: Vec<(String, SemilinearMap)> =
            t.elements().iter().map(|m| (m.to_string(), *m)).collect();
        by_text.sort();
        let xs: Vec<_> = by_text.iter().filter(|(_, m)| line.element_order(m) == ox).map(|p| p.1).collect();
        let ys: Vec<_> = by_text.iter().filter(|(_, m)| line.element_order(m) == oy).map(|p| p.1).collect();
        for x in &xs {
            for y in &ys {
                if closure_size_at_most(line, &[*x, *y], target) == Some(target) {
                    return Ok(self.wrap(vec![*x, *y])?);
                }
            }
        }
        Err(FamilyError::ScanExhausted { tag, q: self.q() })
    }

    pub fn build_normalizer_in_g(&self, tag: FamilyTag, g: &SubgroupInstance) -> Result<SubgroupInstance, FamilyError> {
        let m0 = self.build_m0(tag)?;
        Ok(pline::normalizer(&self.line, &m0, g)?)
    }

    /// `build_m0(tag)` conjugated by δ, a representative of the other T-class.
    pub fn second_class_rep(&self, tag: FamilyTag) -> Result<SubgroupInstance, FamilyError> {
        let q = self.q();
        if !tag.has_two_t_classes(q as u64) {
            return Err(FamilyError::SingleClass { tag, q });
        }
        let m0 = self.build_m0(tag)?;
        Ok(pline::conjugate(&self.line, &m0, &self.line.delta()))
    }
}
