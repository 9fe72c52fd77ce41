use std::collections::HashSet;
use std::sync::Arc;

use psl2max::arith;
use psl2max::classifier::{classify, OuterSpec, Preset};
use psl2max::families::{FamilyTag, SubgroupFactory};
use psl2max::gf::Field;
use psl2max::oracle::{self, Budgets, ClassCounts, Lattice, Level, OracleError};
use psl2max::pline::{self, GroupId, ProjectiveLine, SemilinearMap, SubgroupInstance};

const BUDGET: usize = 1 << 21;

fn line(q: u64) -> ProjectiveLine {
    let (p, f) = arith::prime_power(q).unwrap();
    ProjectiveLine::new(Arc::new(Field::new(p, f).unwrap()))
}

fn build(l: &ProjectiveLine, h: &OuterSpec) -> SubgroupInstance {
    pline::build_group(&GroupId::new(l.field().clone(), h.clone()), BUDGET).unwrap()
}

fn preset_group(l: &ProjectiveLine, q: u64, p: Preset) -> SubgroupInstance {
    build(l, &OuterSpec::preset(q, p).unwrap())
}

/// Cyclic subgroups, then pairwise joins until nothing new appears.
fn naive_subgroup_count(l: &ProjectiveLine, g: &SubgroupInstance) -> usize {
    let mut seen: HashSet<Vec<SemilinearMap>> = HashSet::new();
    let mut subs: Vec<SubgroupInstance> = Vec::new();
    for x in g.elements() {
        let c = pline::closure(l, &[*x], BUDGET).unwrap();
        if seen.insert(c.elements().to_vec()) {
            subs.push(c);
        }
    }
    let mut frontier = 0;
    while frontier < subs.len() {
        let end = subs.len();
        for i in frontier..end {
            for j in 0..end {
                let mut gens = subs[i].generators().to_vec();
                gens.extend_from_slice(subs[j].generators());
                let c = pline::closure(l, &gens, BUDGET).unwrap();
                if seen.insert(c.elements().to_vec()) {
                    subs.push(c);
                }
            }
        }
        frontier = end;
    }
    subs.len()
}

#[test]
fn lattice_matches_naive_recount() {
    for (q, expected) in [(5u64, 59usize), (7, 179)] {
        let l = line(q);
        let t = preset_group(&l, q, Preset::Psl);
        let lat = Lattice::build(&l, &t, 2000).unwrap();
        assert_eq!(lat.total_subgroups(), expected, "PSL(2,{q})");
        assert_eq!(naive_subgroup_count(&l, &t), expected, "PSL(2,{q}) naive");
    }
}

#[test]
fn lattice_self_consistency() {
    for q in [5u64, 7, 8, 9] {
        let l = line(q);
        for h in OuterSpec::all_subgroups(q).unwrap() {
            let g = build(&l, &h);
            let lat = Lattice::build(&l, &g, 2000).unwrap();
            let all = lat.all_subgroups(&l, &g);
            let sizes: usize = lat.classes().iter().map(|c| c.class_size).sum();
            assert_eq!(sizes, all.len());
            assert_eq!(sizes, lat.total_subgroups());
            let distinct: HashSet<_> = all.iter().map(|s| s.elements().to_vec()).collect();
            assert_eq!(distinct.len(), all.len());
            for s in &all {
                assert_eq!(pline::closure(&l, s.generators(), BUDGET).unwrap().elements(), s.elements());
                assert!(s.is_subgroup_of(&g));
                assert_eq!(g.order() % s.order(), 0);
            }
        }
    }
}

#[test]
fn trivial_group_has_one_subgroup() {
    let l = line(7);
    let one = pline::closure(&l, &[], 1).unwrap();
    assert_eq!(oracle::all_subgroups(&l, &one, 10).unwrap().len(), 1);
}

fn max_orders(q: u64, p: Preset) -> Vec<usize> {
    let l = line(q);
    let g = preset_group(&l, q, p);
    let mut v: Vec<_> = oracle::maximal_subgroups_bruteforce(&l, &g, 2000).unwrap().iter().map(|(m, _)| m.order()).collect();
    v.sort();
    v
}

#[test]
fn bruteforce_maximal_examples() {
    assert_eq!(max_orders(5, Preset::Psl), [6, 10, 12]);
    // PGL(2,5) ≅ S_5: also A_5 = T itself.
    assert_eq!(max_orders(5, Preset::Pgl), [12, 20, 24, 60]);
    assert_eq!(max_orders(9, Preset::M(1)), [16, 20, 72, 360]);
}

#[test]
fn is_maximal_examples() {
    let fac = SubgroupFactory::new(line(5).field().clone(), BUDGET);
    let l = fac.line();
    let t = fac.psl().unwrap();
    assert!(oracle::is_maximal(l, &fac.build_m0(FamilyTag::A4).unwrap(), t).unwrap());

    let fac7 = SubgroupFactory::new(line(7).field().clone(), BUDGET);
    let t7 = fac7.psl().unwrap();
    assert!(!oracle::is_maximal(fac7.line(), &fac7.build_m0(FamilyTag::DihedralMinus).unwrap(), t7).unwrap());

    for q in [7u64, 9, 11, 25] {
        let l = line(q);
        let t = preset_group(&l, q, Preset::Psl);
        let pgl = preset_group(&l, q, Preset::Pgl);
        assert!(oracle::is_maximal(&l, &t, &pgl).unwrap());
    }
    assert_eq!(oracle::is_maximal(l, t, t), Err(OracleError::NotProper));
}

#[test]
fn class_count_examples() {
    let fac = SubgroupFactory::new(line(17).field().clone(), BUDGET);
    let l = fac.line();
    let t = fac.psl().unwrap();
    let pgl = preset_group(l, 17, Preset::Pgl);
    let s4 = fac.build_m0(FamilyTag::S4).unwrap();
    assert_eq!(oracle::class_count(l, &s4, t, &pgl).unwrap(), ClassCounts { t_classes: 2, g_classes: 1 });
    let b = fac.build_m0(FamilyTag::PointStabilizer).unwrap();
    assert_eq!(oracle::class_count(l, &b, t, t).unwrap().t_classes, 1);

    let fac9 = SubgroupFactory::new(line(9).field().clone(), BUDGET);
    let l9 = fac9.line();
    let t9 = fac9.psl().unwrap();
    let psigmal = preset_group(l9, 9, Preset::PSigmaL);
    let a5 = fac9.build_m0(FamilyTag::A5).unwrap();
    assert_eq!(oracle::class_count(l9, &a5, t9, &psigmal).unwrap(), ClassCounts { t_classes: 2, g_classes: 2 });
    let other = fac9.second_class_rep(FamilyTag::A5).unwrap();
    assert!(!oracle::fusion_check(l9, &a5, &other, t9, &psigmal).unwrap());
}

#[test]
fn novelty_cross_check() {
    for q in [7u64, 9, 11, 19] {
        let fac = SubgroupFactory::new(line(q).field().clone(), BUDGET);
        let l = fac.line();
        let t = fac.psl().unwrap();
        for h in OuterSpec::all_subgroups(q).unwrap() {
            let g = build(l, &h);
            for d in classify(q, &h).unwrap() {
                let m0 = fac.build_m0(d.family).unwrap();
                let m = pline::normalizer(l, &m0, &g).unwrap();
                let observed = !oracle::is_maximal(l, &m0, t).unwrap() && oracle::is_maximal(l, &m, &g).unwrap();
                assert_eq!(d.novelty, observed, "{} at q = {q}, H = {}", d.family, h.label());
            }
        }
    }
}

#[test]
fn verify_examples() {
    let b = Budgets::default();
    let r = oracle::verify_classification(13, &OuterSpec::preset(13, Preset::Psl).unwrap(), Level::Completeness, &b).unwrap();
    assert!(r.pass, "{r:?}");
    let r = oracle::verify_preset(25, Preset::PSigmaL, Level::Maximality, &b).unwrap();
    assert!(r.pass);
    assert!(r.checks.iter().any(|c| c.descriptor.ends_with("/maximal")));
    let r = oracle::verify_preset(11, Preset::Pgl, Level::Maximality, &b).unwrap();
    assert!(r.pass);
    assert!(r.checks.iter().any(|c| c.descriptor == "dihedral- D_20/novelty" && c.observed == serde_json::json!(true)));
    let r = oracle::verify_preset(49, Preset::PGammaL, Level::Completeness, &b).unwrap();
    assert!(!r.pass && r.budget_exhausted);
    let c = r.checks.iter().find(|c| c.descriptor == "completeness").unwrap();
    assert!(!c.pass);
}

#[test]
fn verify_rejects_bad_input() {
    let b = Budgets::default();
    let h = OuterSpec::preset(9, Preset::Psl).unwrap();
    assert!(oracle::verify_classification(8, &h, Level::Orders, &b).is_err());
    assert!(oracle::verify_classification(12, &h, Level::Orders, &b).is_err());
}
