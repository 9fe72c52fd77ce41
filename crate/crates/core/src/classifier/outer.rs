//! Subgroups of `Out(T) ≅ C_d × C_f` naming the groups `T ≤ G ≤ PΓL(2,q)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OuterError {
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} is below 4; PSL(2,q) is not simple")]
    TooSmall(u64),
    #[error("for even q the diagonal automorphism is inner; i-components must be 0")]
    EvenDiagonal,
    #[error("M(s) requires q odd, f even, s | f/2 (q = {q}, s = {s})")]
    BadM { q: u64, s: u32 },
    #[error("outer automorphism group mismatch: spec is for C_{d}×C_{f}, q = {q} needs C_{qd}×C_{qf}")]
    Mismatch { d: u32, f: u32, q: u64, qd: u32, qf: u32 },
    #[error("cannot parse group spec {0:?}")]
    Parse(String),
}

/// Named groups between PSL(2,q) and PΓL(2,q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Preset {
    Psl,
    Pgl,
    PSigmaL,
    PGammaL,
    /// `M(s,q) = ⟨PSL(2,q), φ^s δ⟩`.
    M(u32),
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Psl => write!(f, "PSL"),
            Preset::Pgl => write!(f, "PGL"),
            Preset::PSigmaL => write!(f, "PSigmaL"),
            Preset::PGammaL => write!(f, "PGammaL"),
            Preset::M(s) => write!(f, "M({s})"),
        }
    }
}

impl FromStr for Preset {
    type Err = OuterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "psl" => Ok(Preset::Psl),
            "pgl" => Ok(Preset::Pgl),
            "psigmal" => Ok(Preset::PSigmaL),
            "pgammal" => Ok(Preset::PGammaL),
            _ => {
                let inner = t
                    .strip_prefix("m(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| OuterError::Parse(s.to_string()))?;
                inner
                    .trim()
                    .parse()
                    .map(Preset::M)
                    .map_err(|_| OuterError::Parse(s.to_string()))
            }
        }
    }
}

/// A group spec as typed by a user: a preset or explicit `(i,j)` generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Preset(Preset),
    Generators(Vec<(u32, u32)>),
}

impl FromStr for GroupSpec {
    type Err = OuterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(p) = s.parse::<Preset>() {
            return Ok(GroupSpec::Preset(p));
        }
        let err = || OuterError::Parse(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        let gens = t
            .split(';')
            .filter(|part| !part.trim().is_empty())
            .map(|part| {
                let (i, j) = part.split_once(',').ok_or_else(err)?;
                Ok((i.trim().parse().map_err(|_| err())?, j.trim().parse().map_err(|_| err())?))
            })
            .collect::<Result<Vec<_>, OuterError>>()?;
        Ok(GroupSpec::Generators(gens))
    }
}

/// `H ≤ C_d × C_f` with `d = gcd(2, q-1)`; element `(i, j)` is the class of `δ^i φ^j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OuterSpec {
    d: u32,
    f: u32,
    generators: Vec<(u32, u32)>,
    elements: Vec<(u32, u32)>,
    name: Option<Preset>,
}

impl PartialEq for OuterSpec {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.f == other.f && self.elements == other.elements
    }
}

impl Eq for OuterSpec {}

/// `(d, f)` for a valid `q ≥ 4`.
pub fn out_shape(q: u64) -> Result<(u64, u32, u32), OuterError> {
    let (p, f) = arith::prime_power(q).ok_or(OuterError::NotPrimePower(q))?;
    if q < 4 {
        return Err(OuterError::TooSmall(q));
    }
    Ok((p, if p == 2 { 1 } else { 2 }, f))
}

impl OuterSpec {
    pub fn from_generators(q: u64, gens: &[(u32, u32)]) -> Result<OuterSpec, OuterError> {
        let (_, d, f) = out_shape(q)?;
        if d == 1 && gens.iter().any(|&(i, _)| i != 0) {
            return Err(OuterError::EvenDiagonal);
        }
        let gens: Vec<(u32, u32)> = gens.iter().map(|&(i, j)| (i % d, j % f)).collect();
        let mut spec = OuterSpec { d, f, elements: generate(d, f, &gens), generators: gens, name: None };
        spec.name = spec.detect_name(q);
        Ok(spec)
    }

    pub fn preset(q: u64, preset: Preset) -> Result<OuterSpec, OuterError> {
        let (_, d, f) = out_shape(q)?;
        let gens = match preset {
            Preset::Psl => vec![],
            Preset::Pgl => {
                if d == 1 {
                    vec![]
                } else {
                    vec![(1, 0)]
                }
            }
            Preset::PSigmaL => {
                if f == 1 {
                    vec![]
                } else {
                    vec![(0, 1)]
                }
            }
            Preset::PGammaL => {
                let mut g = Vec::new();
                if d == 2 {
                    g.push((1, 0));
                }
                if f > 1 {
                    g.push((0, 1));
                }
                g
            }
            Preset::M(s) => {
                if d == 1 || f % 2 != 0 || s == 0 || (f / 2) % s != 0 {
                    return Err(OuterError::BadM { q, s });
                }
                vec![(1, s % f)]
            }
        };
        let elements = generate(d, f, &gens);
        Ok(OuterSpec { d, f, generators: gens, elements, name: Some(preset) })
    }

    pub fn from_group_spec(q: u64, spec: &GroupSpec) -> Result<OuterSpec, OuterError> {
        match spec {
            GroupSpec::Preset(p) => OuterSpec::preset(q, *p),
            GroupSpec::Generators(g) => OuterSpec::from_generators(q, g),
        }
    }

    /// Every subgroup of `C_d × C_f`, ordered by size then element list.
    pub fn all_subgroups(q: u64) -> Result<Vec<OuterSpec>, OuterError> {
        let (_, d, f) = out_shape(q)?;
        let all: Vec<(u32, u32)> = (0..d).flat_map(|i| (0..f).map(move |j| (i, j))).collect();
        let mut seen: Vec<Vec<(u32, u32)>> = Vec::new();
        let mut out = Vec::new();
        // C_d × C_f with d ≤ 2 has every subgroup generated by two elements.
        for x in &all {
            for y in &all {
                let gens = minimal_gens(d, f, &[*x, *y]);
                let els = generate(d, f, &gens);
                if !seen.contains(&els) {
                    seen.push(els);
                    out.push(OuterSpec::from_generators(q, &gens)?);
                }
            }
        }
        out.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        Ok(out)
    }

    fn detect_name(&self, q: u64) -> Option<Preset> {
        let mut candidates = vec![Preset::Psl, Preset::Pgl, Preset::PSigmaL, Preset::PGammaL];
        if self.d == 2 && self.f.is_multiple_of(2) {
            candidates.extend((1..=self.f / 2).filter(|s| (self.f / 2).is_multiple_of(*s)).map(Preset::M));
        }
        candidates
            .into_iter()
            .find(|p| OuterSpec::preset(q, *p).map(|s| s.elements == self.elements).unwrap_or(false))
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn generators(&self) -> &[(u32, u32)] {
        &self.generators
    }

    pub fn elements(&self) -> &[(u32, u32)] {
        &self.elements
    }

    pub fn name(&self) -> Option<Preset> {
        self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, x: (u32, u32)) -> bool {
        self.elements.contains(&(x.0 % self.d, x.1 % self.f))
    }

    /// Whether `PGL(2,q) ≤ G`.
    pub fn contains_pgl(&self) -> bool {
        self.contains((1, 0))
    }

    /// Whether `G = T ⋅ ⟨φ^k⟩` for some `k`; equivalent to a trivial `ρ`.
    pub fn is_field_only(&self) -> bool {
        self.elements.iter().all(|&(i, _)| i == 0)
    }

    /// A label for logs and reports: the preset name, or the generator list.
    pub fn label(&self) -> String {
        match self.name {
            Some(p) => p.to_string(),
            None => self
                .generators
                .iter()
                .map(|(i, j)| format!("{i},{j}"))
                .collect::<Vec<_>>()
                .join(";"),
        }
    }

    pub fn check_matches(&self, q: u64) -> Result<(), OuterError> {
        let (_, d, f) = out_shape(q)?;
        if d != self.d || f != self.f {
            return Err(OuterError::Mismatch { d: self.d, f: self.f, q, qd: d, qf: f });
        }
        Ok(())
    }
}

fn generate(d: u32, f: u32, gens: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut els = vec![(0, 0)];
    let mut i = 0;
    while i < els.len() {
        let (a, b) = els[i];
        for &(x, y) in gens {
            let n = ((a + x) % d, (b + y) % f);
            if !els.contains(&n) {
                els.push(n);
            }
        }
        i += 1;
    }
    els.sort_unstable();
    els
}

fn minimal_gens(d: u32, f: u32, cands: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut gens: Vec<(u32, u32)> = Vec::new();
    for &c in cands {
        if !generate(d, f, &gens).contains(&c) {
            gens.push(c);
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_expand() {
        assert_eq!(OuterSpec::preset(9, Preset::Psl).unwrap().order(), 1);
        assert_eq!(OuterSpec::preset(9, Preset::Pgl).unwrap().elements(), &[(0, 0), (1, 0)]);
        assert_eq!(OuterSpec::preset(9, Preset::PSigmaL).unwrap().elements(), &[(0, 0), (0, 1)]);
        assert_eq!(OuterSpec::preset(9, Preset::PGammaL).unwrap().order(), 4);
        assert_eq!(OuterSpec::preset(9, Preset::M(1)).unwrap().elements(), &[(0, 0), (1, 1)]);
        assert_eq!(OuterSpec::preset(8, Preset::Pgl).unwrap().order(), 1);
        assert_eq!(OuterSpec::preset(81, Preset::M(2)).unwrap().order(), 2);
        assert_eq!(OuterSpec::preset(81, Preset::M(1)).unwrap().order(), 4);
    }

    #[test]
    fn m_requires_conditions() {
        assert!(matches!(OuterSpec::preset(27, Preset::M(1)), Err(OuterError::BadM { .. })));
        assert!(matches!(OuterSpec::preset(16, Preset::M(1)), Err(OuterError::BadM { .. })));
        assert!(matches!(OuterSpec::preset(81, Preset::M(3)), Err(OuterError::BadM { .. })));
        assert!(matches!(OuterSpec::preset(25, Preset::M(0)), Err(OuterError::BadM { .. })));
    }

    #[test]
    fn subgroup_counts() {
        // C_2 × C_2 has five subgroups, C_2 has two, C_1 × C_3 has two.
        assert_eq!(OuterSpec::all_subgroups(9).unwrap().len(), 5);
        assert_eq!(OuterSpec::all_subgroups(7).unwrap().len(), 2);
        assert_eq!(OuterSpec::all_subgroups(8).unwrap().len(), 2);
        // C_2 × C_4: 8 subgroups.
        assert_eq!(OuterSpec::all_subgroups(81).unwrap().len(), 8);
        let names: Vec<_> = OuterSpec::all_subgroups(9).unwrap().iter().map(|h| h.name()).collect();
        assert!(names.contains(&Some(Preset::M(1))));
    }

    #[test]
    fn parsing() {
        assert_eq!("pgammal".parse::<GroupSpec>().unwrap(), GroupSpec::Preset(Preset::PGammaL));
        assert_eq!("M(2)".parse::<GroupSpec>().unwrap(), GroupSpec::Preset(Preset::M(2)));
        assert_eq!("1,0;0,1".parse::<GroupSpec>().unwrap(), GroupSpec::Generators(vec![(1, 0), (0, 1)]));
        assert!("x".parse::<GroupSpec>().is_err());
        assert_eq!(OuterSpec::from_generators(8, &[(1, 0)]).unwrap_err(), OuterError::EvenDiagonal);
        assert_eq!(OuterSpec::from_generators(6, &[]).unwrap_err(), OuterError::NotPrimePower(6));
        let h = OuterSpec::from_generators(9, &[(1, 1)]).unwrap();
        assert_eq!(h.name(), Some(Preset::M(1)));
    }
}
