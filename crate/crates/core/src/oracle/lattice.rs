//! Full subgroup lattice of a small group, up to conjugacy.
//!
//! Elements are indexed through a Cayley table and subgroups are bitsets.
//! Starting from the trivial group, every class representative is joined
//! with every cyclic subgroup of prime-power order; since each subgroup is
//! generated by its prime-power elements, iterating to a fixpoint reaches
//! every conjugacy class. A representative is maximal exactly when each of
//! those joins is the whole group.

use std::hash::{Hash, Hasher};

use rustc_hash::{FxHashMap, FxHashSet};

use super::OracleError;
use crate::arith;
use crate::pline::{ProjectiveLine, SemilinearMap, SubgroupInstance};

/// Default cap on `|G|` for lattice enumeration.
pub const DEFAULT_LATTICE_BUDGET: usize = 2000;

#[derive(Clone, PartialEq, Eq)]
pub(crate) struct Bits(Vec<u64>);

impl Hash for Bits {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }
}

struct Cayley {
    elements: Vec<SemilinearMap>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    n: usize,
    identity: u16,
}

impl Cayley {
    fn new(line: &ProjectiveLine, g: &SubgroupInstance) -> Self {
        let elements = g.elements().to_vec();
        let n = elements.len();
        let index: FxHashMap<SemilinearMap, u16> =
            elements.iter().enumerate().map(|(i, m)| (*m, i as u16)).collect();
        let mut mul = Vec::with_capacity(n * n);
        for x in &elements {
            for y in &elements {
                mul.push(index[&line.compose(x, y)]);
            }
        }
        let inv = elements.iter().map(|x| index[&line.invert(x)]).collect();
        let identity = index[&line.identity()];
        Cayley { elements, mul, inv, n, identity }
    }

    #[inline]
    fn m(&self, x: u16, y: u16) -> u16 {
        self.mul[x as usize * self.n + y as usize]
    }

    fn conj(&self, s: &Bits, g: u16) -> Bits {
        let gi = self.inv[g as usize];
        let mut out = Bits::new(self.n);
        for e in s.ones() {
            out.set(self.m(gi, self.m(e as u16, g)) as usize);
        }
        out
    }

    /// `⟨gens⟩`, or `None` once more than `limit` elements are found.
    fn closure(&self, gens: &[u16], limit: usize) -> Option<Bits> {
        let mut bits = Bits::new(self.n);
        bits.set(self.identity as usize);
        let mut list = vec![self.identity];
        let mut i = 0;
        while i < list.len() {
            let e = list[i];
            for &g in gens {
                let h = self.m(e, g);
                if !bits.get(h as usize) {
                    bits.set(h as usize);
                    list.push(h);
                    if list.len() > limit {
                        return None;
                    }
                }
            }
            i += 1;
        }
        Some(bits)
    }

    fn order_of(&self, x: u16) -> usize {
        let mut cur = x;
        let mut k = 1;
        while cur != self.identity {
            cur = self.m(cur, x);
            k += 1;
        }
        k
    }
}

struct Class {
    gens: Vec<u16>,
    order: usize,
    members: Vec<Bits>,
    maximal: bool,
}

/// One conjugacy class of subgroups.
#[derive(Debug, Clone)]
pub struct SubgroupClassInfo {
    pub order: usize,
    pub class_size: usize,
    pub maximal: bool,
}

pub struct Lattice {
    table: Cayley,
    classes: Vec<Class>,
    whole: usize,
}

impl Lattice {
    pub fn build(line: &ProjectiveLine, g: &SubgroupInstance, budget: usize) -> Result<Lattice, OracleError> {
        let n = g.order();
        if n > budget || n > u16::MAX as usize {
            return Err(OracleError::LatticeBudget { order: n, budget: budget.min(u16::MAX as usize) });
        }
        let table = Cayley::new(line, g);
        let index: FxHashMap<SemilinearMap, u16> =
            table.elements.iter().enumerate().map(|(i, m)| (*m, i as u16)).collect();
        let g_gens: Vec<u16> = g.generators().iter().map(|m| index[m]).collect();

        // One generator per cyclic subgroup of prime-power order > 1.
        let mut cyclic_seen: FxHashSet<Bits> = FxHashSet::default();
        let mut pp_gens: Vec<(u16, Bits)> = Vec::new();
        for x in 0..n as u16 {
            let ord = table.order_of(x);
            if ord == 1 || arith::prime_factors(ord as u64).len() != 1 {
                continue;
            }
            let z = table.closure(&[x], n).expect("cyclic subgroup fits");
            if cyclic_seen.insert(z.clone()) {
                pp_gens.push((x, z));
            }
        }

        let mut lat = Lattice { table, classes: Vec::new(), whole: usize::MAX };
        let mut known: FxHashMap<Bits, usize> = FxHashMap::default();
        let trivial = lat.table.closure(&[], 1).unwrap();
        lat.register(trivial, vec![], &g_gens, &mut known);

        let mut next = 0;
        while next < lat.classes.len() {
            let c = next;
            next += 1;
            if lat.classes[c].order == n {
                lat.classes[c].maximal = false;
                continue;
            }
            let rep = lat.classes[c].members[0].clone();
            let base_gens = lat.classes[c].gens.clone();
            let mut maximal = true;
            for (x, z) in &pp_gens {
                if z.is_subset(&rep) {
                    continue;
                }
                let mut gens = base_gens.clone();
                gens.push(*x);
                match lat.table.closure(&gens, n / 2) {
                    Some(j) => {
                        maximal = false;
                        if !known.contains_key(&j) {
                            lat.register(j, gens, &g_gens, &mut known);
                        }
                    }
                    None => {
                        if lat.whole == usize::MAX {
                            let all = lat.table.closure(&gens, n).unwrap();
                            lat.register(all, gens, &g_gens, &mut known);
                        }
                    }
                }
            }
            lat.classes[c].maximal = maximal;
        }
        Ok(lat)
    }

    fn register(&mut self, bits: Bits, gens: Vec<u16>, g_gens: &[u16], known: &mut FxHashMap<Bits, usize>) {
        let id = self.classes.len();
        let order = bits.count();
        let mut members = vec![bits.clone()];
        let mut local: FxHashSet<Bits> = FxHashSet::default();
        local.insert(bits);
        let mut i = 0;
        while i < members.len() {
            for &g in g_gens {
                let c = self.table.conj(&members[i], g);
                if local.insert(c.clone()) {
                    members.push(c);
                }
            }
            i += 1;
        }
        for m in &members {
            known.insert(m.clone(), id);
        }
        if order == self.table.n {
            self.whole = id;
        }
        self.classes.push(Class { gens, order, members, maximal: false });
    }

    pub fn group_order(&self) -> usize {
        self.table.n
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn total_subgroups(&self) -> usize {
        self.classes.iter().map(|c| c.members.len()).sum()
    }

    pub fn classes(&self) -> Vec<SubgroupClassInfo> {
        self.classes
            .iter()
            .map(|c| SubgroupClassInfo { order: c.order, class_size: c.members.len(), maximal: c.maximal })
            .collect()
    }

    fn instance(&self, line: &ProjectiveLine, g: &SubgroupInstance, bits: &Bits) -> SubgroupInstance {
        let els = bits.ones().map(|i| self.table.elements[i]).collect();
        SubgroupInstance::from_elements(line, g.ambient().clone(), els).expect("lattice members are subgroups")
    }

    /// Every subgroup of the group, materialized.
    pub fn all_subgroups(&self, line: &ProjectiveLine, g: &SubgroupInstance) -> Vec<SubgroupInstance> {
        self.classes.iter().flat_map(|c| c.members.iter()).map(|b| self.instance(line, g, b)).collect()
    }

    /// Representatives of the classes of maximal subgroups, with class sizes.
    pub fn maximal_classes(&self, line: &ProjectiveLine, g: &SubgroupInstance) -> Vec<(SubgroupInstance, usize)> {
        self.classes
            .iter()
            .filter(|c| c.maximal)
            .map(|c| (self.instance(line, g, &c.members[0]), c.members.len()))
            .collect()
    }

    fn bits_of(&self, s: &SubgroupInstance) -> Bits {
        let mut b = Bits::new(self.table.n);
        for (i, e) in self.table.elements.iter().enumerate() {
            if s.contains(e) {
                b.set(i);
            }
        }
        b
    }

    /// For each maximal class not containing `t`, `(|M|, |M ∩ t|, whether
    /// M ∩ t fails to be maximal in t)`.
    pub fn maximal_profile(&self, t: &SubgroupInstance) -> Vec<(u64, u64, bool)> {
        let tb = self.bits_of(t);
        let t_order = tb.count();
        let mut out = Vec::new();
        for c in self.classes.iter().filter(|c| c.maximal) {
            let m = &c.members[0];
            if tb.is_subset(m) {
                continue;
            }
            let mt = m.and(&tb);
            let k = mt.count();
            let intermediate = self.classes.iter().filter(|d| d.order > k && d.order < t_order && d.order % k == 0).any(
                |d| d.members.iter().any(|b| mt.is_subset(b) && b.is_subset(&tb)),
            );
            out.push((c.order as u64, k as u64, intermediate));
        }
        out.sort_unstable();
        out
    }
}
