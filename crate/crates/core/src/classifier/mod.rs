//! The classification as a pure decision procedure over `(q, H)`.
//!
//! [`classify`] lists the `G`-classes of maximal subgroups of
//! `G = T ⋅ H` not containing `T = PSL(2,q)`. Everything is formula
//! evaluation; no group is constructed here.

mod fixtures;
mod outer;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::families::{FamilyTag, SubfieldKind};

pub use fixtures::{theorem_fixture, Fixture, FixtureError, NoveltyRow, Theorem};
pub use outer::{out_shape, GroupSpec, OuterError, OuterSpec, Preset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// One `G`-class (or a pair of classes) of maximal subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxSubgroupDescriptor {
    pub family: FamilyTag,
    pub q0: Option<u64>,
    pub sign: Option<Sign>,
    pub m0_order: u64,
    pub m_order: u64,
    #[serde(rename = "classes")]
    pub class_count: u8,
    pub novelty: bool,
    pub structure: Option<String>,
}

impl MaxSubgroupDescriptor {
    /// Family plus parameters, ignoring orders that depend on `H`.
    pub fn key(&self) -> (FamilyTag, Option<u64>, Option<Sign>) {
        (self.family, self.q0, self.sign)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RhoValue {
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Outer(#[from] OuterError),
    #[error("{tag} does not have two T-classes at q = {q}")]
    SingleClass { tag: FamilyTag, q: u64 },
}

/// Projection of `H` to the diagonal factor `⟨δ̄⟩`.
pub fn rho(h: &OuterSpec) -> RhoValue {
    RhoValue { trivial: h.elements().iter().all(|&(i, _)| i == 0) }
}

/// Whether the two T-classes of `family` are fused in `G = T ⋅ H`.
pub fn fusion_predicate(family: FamilyTag, q: u64, h: &OuterSpec) -> Result<bool, ClassifyError> {
    h.check_matches(q)?;
    if !family.has_two_t_classes(q) {
        return Err(ClassifyError::SingleClass { tag: family, q });
    }
    Ok(!rho(h).trivial)
}

struct Ctx {
    q: u64,
    p: u64,
    f: u32,
    h_order: u64,
    field_only: bool,
    pgl_exactly: bool,
    h_trivial: bool,
    m10_like: bool,
    pgammal: bool,
}

/// Rows of the decision table, before novelty marking.
fn table(q: u64, h: &OuterSpec) -> Result<Vec<MaxSubgroupDescriptor>, ClassifyError> {
    let (p, _, f) = out_shape(q)?;
    h.check_matches(q)?;
    let ctx = Ctx {
        q,
        p,
        f,
        h_order: h.order() as u64,
        field_only: rho(h).trivial,
        pgl_exactly: p != 2 && h.elements() == [(0, 0), (1, 0)],
        h_trivial: h.is_trivial(),
        m10_like: q == 9 && h.elements() == [(0, 0), (1, 1)],
        pgammal: q == 9 && h.order() == 4,
    };
    let mut out = Vec::new();
    let mut push = |family: FamilyTag, q0: Option<u64>, sign: Option<Sign>, classes: u8, structure: Option<String>| {
        let m0 = family.t_order(q).expect("family parameters valid");
        out.push(MaxSubgroupDescriptor {
            family,
            q0,
            sign,
            m0_order: m0,
            m_order: m0 * ctx.h_order,
            class_count: classes,
            novelty: false,
            structure,
        });
    };

    push(FamilyTag::PointStabilizer, None, None, 1, point_structure(&ctx));

    let minus_excluded = q == 5 || (matches!(q, 7 | 9 | 11) && ctx.field_only);
    if !minus_excluded {
        let s = dihedral_structure(&ctx, FamilyTag::DihedralMinus);
        push(FamilyTag::DihedralMinus, None, Some(Sign::Minus), 1, s);
    }
    let plus_excluded = matches!(q, 7 | 9) && ctx.field_only;
    if !plus_excluded {
        let s = dihedral_structure(&ctx, FamilyTag::DihedralPlus);
        push(FamilyTag::DihedralPlus, None, Some(Sign::Plus), 1, s);
    }

    for r in arith::prime_factors(f as u64) {
        let r = r as u32;
        let q0 = p.pow(f / r);
        let entry = if p == 2 {
            (q0 != 2).then_some((SubfieldKind::Pgl, 1))
        } else if r % 2 == 1 {
            Some((SubfieldKind::Psl, 1))
        } else if ctx.field_only {
            Some((SubfieldKind::Pgl, 2))
        } else {
            None
        };
        if let Some((kind, classes)) = entry {
            let s = ctx.h_trivial.then(|| match kind {
                SubfieldKind::Pgl => format!("PGL(2,{q0})"),
                SubfieldKind::Psl => format!("PSL(2,{q0})"),
            });
            push(FamilyTag::Subfield { r, kind }, Some(q0), None, classes, s);
        }
    }

    let a5_q = (f == 1 && (q % 10 == 1 || q % 10 == 9)) || (f == 2 && (p % 10 == 3 || p % 10 == 7));
    if p != 2 && a5_q && ctx.field_only {
        let s = if ctx.h_trivial { "A_5" } else { "S_5" };
        push(FamilyTag::A5, None, None, 2, Some(s.to_string()));
    }

    if f == 1 && (q % 8 == 3 || q % 8 == 5) {
        if ctx.h_trivial && q % 10 != 1 && q % 10 != 9 {
            push(FamilyTag::A4, None, None, 1, Some("A_4".into()));
        } else if ctx.pgl_exactly {
            push(FamilyTag::A4, None, None, 1, Some("S_4".into()));
        }
    }

    if p != 2 && f == 1 && (q % 8 == 1 || q % 8 == 7) && ctx.h_trivial {
        push(FamilyTag::S4, None, None, 2, Some("S_4".into()));
    }
    Ok(out)
}

fn point_structure(ctx: &Ctx) -> Option<String> {
    let base = if ctx.f == 1 { format!("C_{}", ctx.p) } else { format!("C_{}^{}", ctx.p, ctx.f) };
    let d = if ctx.p == 2 { 1 } else { 2 };
    if ctx.h_trivial {
        Some(format!("{base}⋊C_{}", (ctx.q - 1) / d))
    } else if ctx.pgl_exactly {
        Some(format!("{base}⋊C_{}", ctx.q - 1))
    } else {
        None
    }
}

fn dihedral_structure(ctx: &Ctx, tag: FamilyTag) -> Option<String> {
    let n = tag.t_order(ctx.q)?;
    let plus = tag == FamilyTag::DihedralPlus;
    if ctx.h_trivial {
        Some(format!("D_{n}"))
    } else if ctx.pgl_exactly {
        Some(format!("D_{}", 2 * n))
    } else if ctx.m10_like {
        Some(if plus { "C_5⋊C_4" } else { "C_8⋊C_2" }.to_string())
    } else if ctx.pgammal && plus {
        Some("C_10⋊C_4".to_string())
    } else {
        None
    }
}

/// The `G`-classes of maximal subgroups of `G = T ⋅ H` not containing `T`.
pub fn classify(q: u64, h: &OuterSpec) -> Result<Vec<MaxSubgroupDescriptor>, ClassifyError> {
    let mut rows = table(q, h)?;
    if !h.is_trivial() {
        let base: Vec<_> = table(q, &OuterSpec::preset(q, Preset::Psl)?)?.iter().map(|d| d.key()).collect();
        for row in &mut rows {
            row.novelty = !base.contains(&row.key());
        }
    }
    Ok(rows)
}

/// Number of maximal subgroups of `G` not containing `T`, counted with
/// multiplicity `|G : M|` per class.
pub fn count_maximal_subgroups(q: u64, h: &OuterSpec, rows: &[MaxSubgroupDescriptor]) -> u64 {
    let (_, d, _) = out_shape(q).expect("validated by classify");
    let g = q * (q * q - 1) / d as u64 * h.order() as u64;
    rows.iter().map(|r| g / r.m_order * r.class_count as u64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preset(q: u64, p: Preset) -> OuterSpec {
        OuterSpec::preset(q, p).unwrap()
    }

    fn orders(rows: &[MaxSubgroupDescriptor]) -> Vec<(u64, u8, bool)> {
        rows.iter().map(|r| (r.m_order, r.class_count, r.novelty)).collect()
    }

    #[test]
    fn rho_values() {
        assert!(rho(&preset(9, Preset::PSigmaL)).trivial);
        assert!(!rho(&preset(9, Preset::M(1))).trivial);
        assert!(!rho(&preset(7, Preset::Pgl)).trivial);
    }

    #[test]
    fn pgl7() {
        let rows = classify(7, &preset(7, Preset::Pgl)).unwrap();
        assert_eq!(orders(&rows), vec![(42, 1, false), (12, 1, true), (16, 1, true)]);
        assert_eq!(rows[1].structure.as_deref(), Some("D_12"));
        assert_eq!(rows[2].structure.as_deref(), Some("D_16"));
    }

    #[test]
    fn m10() {
        let rows = classify(9, &preset(9, Preset::M(1))).unwrap();
        assert_eq!(orders(&rows), vec![(72, 1, false), (16, 1, true), (20, 1, true)]);
        assert_eq!(rows[1].structure.as_deref(), Some("C_8⋊C_2"));
        assert_eq!(rows[2].structure.as_deref(), Some("C_5⋊C_4"));
    }

    #[test]
    fn psigmal9() {
        let rows = classify(9, &preset(9, Preset::PSigmaL)).unwrap();
        assert_eq!(orders(&rows), vec![(72, 1, false), (48, 2, false), (120, 2, false)]);
        assert_eq!(rows[2].structure.as_deref(), Some("S_5"));
    }

    #[test]
    fn psl4_excludes_subfield_over_gf2() {
        let rows = classify(4, &preset(4, Preset::Psl)).unwrap();
        assert_eq!(orders(&rows), vec![(12, 1, false), (6, 1, false), (10, 1, false)]);
    }

    #[test]
    fn fusion() {
        assert!(fusion_predicate(FamilyTag::S4, 17, &preset(17, Preset::Pgl)).unwrap());
        assert!(!fusion_predicate(FamilyTag::A5, 9, &preset(9, Preset::PSigmaL)).unwrap());
        let sub = FamilyTag::Subfield { r: 2, kind: SubfieldKind::Pgl };
        assert!(!fusion_predicate(sub, 25, &preset(25, Preset::PSigmaL)).unwrap());
        assert!(fusion_predicate(FamilyTag::PointStabilizer, 25, &preset(25, Preset::Psl)).is_err());
    }

    #[test]
    fn errors() {
        assert!(matches!(classify(6, &preset(4, Preset::Psl)), Err(ClassifyError::Outer(_))));
        assert!(matches!(
            classify(9, &preset(8, Preset::Psl)),
            Err(ClassifyError::Outer(OuterError::Mismatch { .. }))
        ));
        assert!(matches!(OuterSpec::preset(3, Preset::Psl), Err(OuterError::TooSmall(3))));
    }

    #[test]
    fn descriptor_json_schema() {
        let rows = classify(9, &preset(9, Preset::M(1))).unwrap();
        let v = serde_json::to_value(&rows[2]).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys.len(), 8);
        for k in ["family", "q0", "sign", "m0_order", "m_order", "classes", "novelty", "structure"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert_eq!(v["family"], "dihedral+");
        assert_eq!(v["sign"], "+");
        let back: MaxSubgroupDescriptor = serde_json::from_value(v).unwrap();
        assert_eq!(back, rows[2]);
    }
}
