use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;
use psl2max::arith;
use psl2max::classifier::Preset;
use psl2max::gf::Field;
use psl2max::pline::{self, GroupId, PPoint, ProjectiveLine, SemilinearMap, SubgroupInstance};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const BUDGET: usize = 1 << 21;

fn line(q: u64) -> ProjectiveLine {
    let (p, f) = arith::prime_power(q).unwrap();
    ProjectiveLine::new(Arc::new(Field::new(p, f).unwrap()))
}

fn build(l: &ProjectiveLine, preset: Preset) -> SubgroupInstance {
    pline::build_group(&GroupId::preset(l.field().clone(), preset).unwrap(), BUDGET).unwrap()
}

fn qs(max: u64) -> Vec<u64> {
    (4..=max).filter(|&q| arith::prime_power(q).is_some()).collect()
}

#[test]
fn order_identities() {
    for q in [4u64, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
        let l = line(q);
        let (_, f) = arith::prime_power(q).unwrap();
        let d = arith::gcd(2, q - 1);
        let n = q * (q * q - 1);
        assert_eq!(build(&l, Preset::Psl).order() as u64, n / d, "PSL(2,{q})");
        assert_eq!(build(&l, Preset::PGammaL).order() as u64, n * f as u64, "PΓL(2,{q})");
        if q % 2 == 1 {
            assert_eq!(build(&l, Preset::Pgl).order() as u64, n, "PGL(2,{q})");
        }
    }
}

#[test]
fn action_is_faithful() {
    for q in qs(49) {
        let l = line(q);
        let g = build(&l, Preset::PGammaL);
        let pts = l.points();
        let perms: HashSet<Vec<PPoint>> =
            g.elements().iter().map(|m| pts.iter().map(|&z| l.apply(m, z)).collect()).collect();
        assert_eq!(perms.len(), g.order(), "q = {q}");
    }
}

#[test]
fn in_psl_counts() {
    for q in qs(27) {
        let l = line(q);
        let (_, f) = arith::prime_power(q).unwrap();
        let g = build(&l, Preset::PGammaL);
        let t = build(&l, Preset::Psl);
        let count = g.elements().iter().filter(|m| l.in_psl(m)).count();
        assert_eq!(count, t.order());
        assert_eq!(g.order() / t.order(), arith::gcd(2, q - 1) as usize * f as usize);
        assert!(t.elements().iter().all(|m| l.in_psl(m)));
    }
}

#[test]
fn transitivity() {
    for q in qs(27) {
        let l = line(q);
        let t = build(&l, Preset::Psl);
        assert!(pline::is_k_transitive(&l, &t, 2).unwrap(), "PSL(2,{q}) 2-transitive");
        let pgl = build(&l, Preset::Pgl);
        assert!(pline::is_k_transitive(&l, &pgl, 3).unwrap(), "PGL(2,{q}) 3-transitive");
        assert_eq!(pgl.order() as u64, (q + 1) * q * (q - 1), "sharply");
        if q % 2 == 1 {
            assert!(!pline::is_k_transitive(&l, &t, 3).unwrap());
        }
    }
}

fn random_map(l: &ProjectiveLine, rng: &mut StdRng) -> SemilinearMap {
    let k = l.field();
    let q = k.order() as u64;
    loop {
        let c: Vec<_> = (0..4).map(|_| k.elem(rng.gen_range(0..q)).unwrap()).collect();
        let j = rng.gen_range(0..k.degree());
        if let Ok(m) = l.map(c[0], c[1], c[2], c[3], j) {
            return m;
        }
    }
}

#[test]
fn composition_associative_sampled() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for q in [4u64, 8, 9, 25, 27, 32, 49, 81, 121, 125, 343, 1024] {
        let l = line(q);
        for _ in 0..10_000 {
            let (a, b, c) = (random_map(&l, &mut rng), random_map(&l, &mut rng), random_map(&l, &mut rng));
            assert_eq!(l.compose(&l.compose(&a, &b), &c), l.compose(&a, &l.compose(&b, &c)));
            assert_eq!(l.invert(&l.invert(&a)), a);
            assert_eq!(l.compose(&a, &l.invert(&a)), l.identity());
        }
    }
}

#[test]
fn action_respects_composition() {
    let mut rng = StdRng::seed_from_u64(7);
    for q in [9u64, 16, 27, 49] {
        let l = line(q);
        for _ in 0..500 {
            let (a, b) = (random_map(&l, &mut rng), random_map(&l, &mut rng));
            let ab = l.compose(&a, &b);
            for z in l.points() {
                // Maps act on the left: (a∘b)(z) = a(b(z)).
                assert_eq!(l.apply(&ab, z), l.apply(&a, l.apply(&b, z)));
            }
        }
    }
}

#[test]
fn normalizer_contains_subgroup() {
    let l = line(9);
    let g = build(&l, Preset::PGammaL);
    let t = build(&l, Preset::Psl);
    let n = pline::normalizer(&l, &t, &g).unwrap();
    assert_eq!(n.order(), g.order());
    let c = pline::closure(&l, &[l.t(l.field().xi_pow(2), l.field().zero(), l.field().zero(), l.field().one()).unwrap()], BUDGET).unwrap();
    let nc = pline::normalizer(&l, &c, &t).unwrap();
    assert!(c.is_subgroup_of(&nc));
    assert_eq!(nc.order(), 8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_roundtrip(seed in any::<u64>(), qi in 0usize..5) {
        let q = [7u64, 9, 16, 27, 125][qi];
        let l = line(q);
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_map(&l, &mut rng);
        prop_assert_eq!(l.parse(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn order_divides_group_order(seed in any::<u64>(), qi in 0usize..4) {
        let q = [8u64, 25, 27, 49][qi];
        let l = line(q);
        let (_, f) = arith::prime_power(q).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_map(&l, &mut rng);
        let o = l.element_order(&m);
        let n = q * (q * q - 1) * f as u64;
        prop_assert_eq!(n % o, 0);
        prop_assert_eq!(l.power(&m, o), l.identity());
    }
}
