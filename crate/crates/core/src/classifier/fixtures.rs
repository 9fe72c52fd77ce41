//! Literal transcriptions of the published subgroup lists, used only to
//! cross-check [`classify`](super::classify). Orders here come from the
//! lists' own formulas, not from [`FamilyTag::t_order`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{classify, ClassifyError, MaxSubgroupDescriptor, OuterSpec, Preset, Sign};
use crate::arith;
use crate::families::{FamilyTag, SubfieldKind};

/// The lists available as fixtures. `id()` gives the external name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// PSL(2,q), q even.
    PslEven,
    /// PSL(2,q), q odd.
    PslOdd,
    /// PGL(2,q), q odd.
    PglOdd,
    /// PΣL(2,q), q odd, f ≥ 2.
    PSigmaL,
    /// PΓL(2,q), q not prime.
    PGammaL,
    /// M(s,q).
    Msq(u32),
    /// The novelty table.
    Novelties,
    /// Maximal subgroups of groups over PGL(2,q) come from PGL(2,q).
    OverPgl,
}

impl Theorem {
    pub fn id(&self) -> &'static str {
        match self {
            Theorem::PslEven => "Thm2.1",
            Theorem::PslOdd => "Thm2.2",
            Theorem::PglOdd => "Thm3.5",
            Theorem::PSigmaL => "Thm1.2",
            Theorem::PGammaL => "Thm1.3",
            Theorem::Msq(_) => "Thm1.4",
            Theorem::Novelties => "Table1",
            Theorem::OverPgl => "Cor1.2",
        }
    }

    /// The group the list describes, when it is a single preset.
    pub fn preset(&self) -> Option<Preset> {
        match self {
            Theorem::PslEven | Theorem::PslOdd => Some(Preset::Psl),
            Theorem::PglOdd => Some(Preset::Pgl),
            Theorem::PSigmaL => Some(Preset::PSigmaL),
            Theorem::PGammaL => Some(Preset::PGammaL),
            Theorem::Msq(s) => Some(Preset::M(*s)),
            Theorem::Novelties | Theorem::OverPgl => None,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = FixtureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "thm2.1" | "psl-even" => Theorem::PslEven,
            "thm2.2" | "psl-odd" => Theorem::PslOdd,
            "thm3.5" | "pgl" => Theorem::PglOdd,
            "thm1.2" | "psigmal" => Theorem::PSigmaL,
            "thm1.3" | "pgammal" => Theorem::PGammaL,
            "thm1.4" | "m" => Theorem::Msq(1),
            "table1" | "novelties" => Theorem::Novelties,
            "cor1.2" | "over-pgl" => Theorem::OverPgl,
            _ => return Err(FixtureError::UnknownTheorem(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),
    #[error("{theorem} does not apply to q = {q}")]
    Hypothesis { theorem: &'static str, q: u64 },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// One concrete novelty `(q, G, M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoveltyRow {
    pub q: u64,
    pub group: String,
    pub preset: Preset,
    pub family: FamilyTag,
    pub structure: Option<String>,
    pub m_order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fixture {
    Descriptors(Vec<MaxSubgroupDescriptor>),
    Novelties(Vec<NoveltyRow>),
    Holds(bool),
}

fn row(
    family: FamilyTag,
    q0: Option<u64>,
    sign: Option<Sign>,
    m0_order: u64,
    h: u64,
    classes: u8,
) -> MaxSubgroupDescriptor {
    MaxSubgroupDescriptor {
        family,
        q0,
        sign,
        m0_order,
        m_order: m0_order * h,
        class_count: classes,
        novelty: false,
        structure: None,
    }
}

fn psl_order(q0: u64) -> u64 {
    q0 * (q0 * q0 - 1) / arith::gcd(2, q0 - 1)
}

fn pgl_order(q0: u64) -> u64 {
    q0 * (q0 * q0 - 1)
}

/// `(r, q0)` for every prime `r | f`.
fn subfields(p: u64, f: u32) -> Vec<(u32, u64)> {
    arith::prime_factors(f as u64).into_iter().map(|r| (r as u32, p.pow(f / r as u32))).collect()
}

const MINUS: Option<Sign> = Some(Sign::Minus);
const PLUS: Option<Sign> = Some(Sign::Plus);

/// Transcribed list for `theorem` at `q`.
pub fn theorem_fixture(theorem: Theorem, q: u64) -> Result<Fixture, FixtureError> {
    let id = theorem.id();
    let bad = || FixtureError::Hypothesis { theorem: id, q };
    let (p, f) = arith::prime_power(q).ok_or_else(bad)?;
    if q < 4 {
        return Err(bad());
    }
    let pgl_sub = |r: u32| FamilyTag::Subfield { r, kind: SubfieldKind::Pgl };
    let psl_sub = |r: u32| FamilyTag::Subfield { r, kind: SubfieldKind::Psl };
    let rows = match theorem {
        Theorem::PslEven => {
            if p != 2 {
                return Err(bad());
            }
            let mut v = vec![
                row(FamilyTag::PointStabilizer, None, None, q * (q - 1), 1, 1),
                row(FamilyTag::DihedralMinus, None, MINUS, 2 * (q - 1), 1, 1),
                row(FamilyTag::DihedralPlus, None, PLUS, 2 * (q + 1), 1, 1),
            ];
            for (r, q0) in subfields(p, f) {
                if q0 != 2 {
                    v.push(row(pgl_sub(r), Some(q0), None, pgl_order(q0), 1, 1));
                }
            }
            v
        }
        Theorem::PslOdd => {
            if p == 2 || q < 5 {
                return Err(bad());
            }
            let mut v = vec![row(FamilyTag::PointStabilizer, None, None, q * (q - 1) / 2, 1, 1)];
            if q >= 13 {
                v.push(row(FamilyTag::DihedralMinus, None, MINUS, q - 1, 1, 1));
            }
            if q != 7 && q != 9 {
                v.push(row(FamilyTag::DihedralPlus, None, PLUS, q + 1, 1, 1));
            }
            for (r, q0) in subfields(p, f) {
                if r == 2 {
                    v.push(row(pgl_sub(2), Some(q0), None, pgl_order(q0), 1, 2));
                } else {
                    v.push(row(psl_sub(r), Some(q0), None, psl_order(q0), 1, 1));
                }
            }
            let pm1_10 = q % 10 == 1 || q % 10 == 9;
            if pm1_10 && (f == 1 || (f == 2 && (p % 10 == 3 || p % 10 == 7))) {
                v.push(row(FamilyTag::A5, None, None, 60, 1, 2));
            }
            if f == 1 && (q % 8 == 3 || q % 8 == 5) && !pm1_10 {
                v.push(row(FamilyTag::A4, None, None, 12, 1, 1));
            }
            if f == 1 && (q % 8 == 1 || q % 8 == 7) {
                v.push(row(FamilyTag::S4, None, None, 24, 1, 2));
            }
            v
        }
        Theorem::PglOdd => {
            if p == 2 || q <= 3 {
                return Err(bad());
            }
            // Orders are those of the subgroups of PGL(2,q); M0 has index 2.
            let mut v = vec![row(FamilyTag::PointStabilizer, None, None, q * (q - 1) / 2, 2, 1)];
            if q != 5 {
                v.push(row(FamilyTag::DihedralMinus, None, MINUS, q - 1, 2, 1));
            }
            v.push(row(FamilyTag::DihedralPlus, None, PLUS, q + 1, 2, 1));
            if f == 1 && (q % 8 == 3 || q % 8 == 5) {
                v.push(row(FamilyTag::A4, None, None, 12, 2, 1));
            }
            for (r, q0) in subfields(p, f) {
                if r != 2 {
                    v.push(row(psl_sub(r), Some(q0), None, pgl_order(q0) / 2, 2, 1));
                }
            }
            v
        }
        Theorem::PSigmaL => {
            if p == 2 || f < 2 {
                return Err(bad());
            }
            let h = f as u64;
            let mut v = vec![row(FamilyTag::PointStabilizer, None, None, q * (q - 1) / 2, h, 1)];
            if q != 9 {
                v.push(row(FamilyTag::DihedralMinus, None, MINUS, q - 1, h, 1));
                v.push(row(FamilyTag::DihedralPlus, None, PLUS, q + 1, h, 1));
            }
            if (p % 10 == 3 || p % 10 == 7) && f == 2 {
                // S_5 = N_G(A_5), two classes.
                v.push(row(FamilyTag::A5, None, None, 60, h, 2));
            }
            for (r, q0) in subfields(p, f) {
                if r == 2 {
                    // N_T(PSL(2,q0)) = PGL(2,q0) when q = q0².
                    v.push(row(pgl_sub(2), Some(q0), None, pgl_order(q0), h, 2));
                } else {
                    v.push(row(psl_sub(r), Some(q0), None, psl_order(q0), h, 1));
                }
            }
            v
        }
        Theorem::PGammaL => {
            if f == 1 {
                return Err(bad());
            }
            let d = if p == 2 { 1 } else { 2 };
            let h = d * f as u64;
            let mut v = vec![
                row(FamilyTag::PointStabilizer, None, None, q * (q - 1) / d, h, 1),
                row(FamilyTag::DihedralMinus, None, MINUS, 2 * (q - 1) / d, h, 1),
                row(FamilyTag::DihedralPlus, None, PLUS, 2 * (q + 1) / d, h, 1),
            ];
            for (r, q0) in subfields(p, f) {
                if q0 == 2 || (p != 2 && r == 2) {
                    continue;
                }
                if p == 2 {
                    v.push(row(pgl_sub(r), Some(q0), None, pgl_order(q0), h, 1));
                } else {
                    v.push(row(psl_sub(r), Some(q0), None, psl_order(q0), h, 1));
                }
            }
            v
        }
        Theorem::Msq(s) => {
            if p == 2 || f % 2 != 0 || s == 0 || (f / 2) % s != 0 {
                return Err(bad());
            }
            let h = (f / s) as u64;
            let mut v = vec![
                row(FamilyTag::PointStabilizer, None, None, q * (q - 1) / 2, h, 1),
                row(FamilyTag::DihedralMinus, None, MINUS, q - 1, h, 1),
                row(FamilyTag::DihedralPlus, None, PLUS, q + 1, h, 1),
            ];
            for (r, q0) in subfields(p, f) {
                if r != 2 {
                    v.push(row(psl_sub(r), Some(q0), None, psl_order(q0), h, 1));
                }
            }
            v
        }
        Theorem::Novelties => return Ok(Fixture::Novelties(novelty_rows(q, p, f))),
        Theorem::OverPgl => {
            let pgl = classify(q, &OuterSpec::preset(q, Preset::Pgl).map_err(ClassifyError::from)?)?;
            let keys: Vec<_> = pgl.iter().map(|d| d.key()).collect();
            let mut holds = true;
            for h in OuterSpec::all_subgroups(q).map_err(ClassifyError::from)? {
                if !h.contains_pgl() {
                    continue;
                }
                holds &= classify(q, &h)?.iter().all(|d| keys.contains(&d.key()));
            }
            return Ok(Fixture::Holds(holds));
        }
    };
    Ok(Fixture::Descriptors(rows))
}

fn novelty_rows(q: u64, p: u64, f: u32) -> Vec<NoveltyRow> {
    let mk = |group: &str, preset, family, structure: Option<&str>, m_order| NoveltyRow {
        q,
        group: group.to_string(),
        preset,
        family,
        structure: structure.map(str::to_string),
        m_order,
    };
    let (minus, plus) = (FamilyTag::DihedralMinus, FamilyTag::DihedralPlus);
    let mut v = Vec::new();
    match q {
        7 => {
            v.push(mk("PGL(2,7)", Preset::Pgl, minus, Some("D_12"), 12));
            v.push(mk("PGL(2,7)", Preset::Pgl, plus, Some("D_16"), 16));
        }
        9 => {
            v.push(mk("PGL(2,9)", Preset::Pgl, plus, Some("D_20"), 20));
            v.push(mk("PGL(2,9)", Preset::Pgl, minus, Some("D_16"), 16));
            v.push(mk("M_10", Preset::M(1), plus, Some("C_5⋊C_4"), 20));
            v.push(mk("M_10", Preset::M(1), minus, Some("C_8⋊C_2"), 16));
            v.push(mk("PΓL(2,9)", Preset::PGammaL, plus, Some("C_10⋊C_4"), 40));
            // |N_G(D_8)| = 8 ⋅ |G/T|.
            v.push(mk("PΓL(2,9)", Preset::PGammaL, minus, None, 32));
        }
        11 => v.push(mk("PGL(2,11)", Preset::Pgl, minus, Some("D_20"), 20)),
        _ => {}
    }
    if f == 1 && p != 2 && matches!(q % 40, 11 | 19 | 21 | 29) {
        v.push(mk(&format!("PGL(2,{q})"), Preset::Pgl, FamilyTag::A4, Some("S_4"), 24));
    }
    v
}
