use psl2max::arith;
use psl2max::gf::{Field, FieldElem};
use proptest::prelude::*;
use std::collections::HashSet;

fn prime_powers(max: u64) -> Vec<(u64, u32)> {
    (2..=max).filter_map(arith::prime_power).collect()
}

fn field(p: u64, f: u32) -> Field {
    Field::new(p, f).unwrap()
}

#[test]
fn fermat_identities() {
    for (p, f) in prime_powers(81) {
        let k = field(p, f);
        let q = k.order() as u64;
        for x in k.elements() {
            assert_eq!(k.pow(x, q), x, "x^q = x in GF({q})");
            if !x.is_zero() {
                assert_eq!(k.pow(x, q - 1), k.one(), "x^(q-1) = 1 in GF({q})");
            }
        }
    }
}

#[test]
fn xi_generates_multiplicative_group() {
    for (p, f) in prime_powers(81) {
        let k = field(p, f);
        let q = k.order() as u64;
        let powers: HashSet<FieldElem> = (0..q - 1).map(|i| k.xi_pow(i)).collect();
        assert_eq!(powers.len() as u64, q - 1);
        assert!(!powers.contains(&k.zero()));
        assert_eq!(k.multiplicative_order(k.primitive()).unwrap() as u64, q - 1);
    }
}

#[test]
fn squares_count() {
    for (p, f) in prime_powers(81).into_iter().filter(|&(p, _)| p != 2) {
        let k = field(p, f);
        let q = k.order() as usize;
        let by_pred = k.elements().filter(|&x| !x.is_zero() && k.is_square(x).unwrap()).count();
        let by_image: HashSet<_> = k.elements().filter(|x| !x.is_zero()).map(|x| k.mul(x, x)).collect();
        assert_eq!(by_pred, (q - 1) / 2);
        assert_eq!(by_image.len(), (q - 1) / 2);
    }
}

#[test]
fn frobenius_is_automorphism() {
    for (p, f) in prime_powers(49) {
        let k = field(p, f);
        let els: Vec<_> = k.elements().collect();
        for &x in &els {
            for &y in &els {
                let fx = k.frobenius(x, 1);
                let fy = k.frobenius(y, 1);
                assert_eq!(k.frobenius(k.add(x, y), 1), k.add(fx, fy));
                assert_eq!(k.frobenius(k.mul(x, y), 1), k.mul(fx, fy));
            }
        }
        let images: HashSet<_> = els.iter().map(|&x| k.frobenius(x, 1)).collect();
        assert_eq!(images.len(), els.len());
        for &x in &els {
            assert_eq!(k.frobenius(x, f as i64), x);
            assert_eq!(k.frobenius(k.frobenius(x, 1), -1), x);
        }
    }
}

#[test]
fn subfield_sizes() {
    for (p, f) in prime_powers(81) {
        let k = field(p, f);
        for r in arith::prime_factors(f as u64) {
            let r = r as u32;
            let q0 = k.subfield_order(r).unwrap() as usize;
            assert_eq!(q0 as u64, arith::ipow(p, f / r));
            assert_eq!(k.elements().filter(|&x| k.in_subfield(x, r).unwrap()).count(), q0);
        }
    }
}

#[test]
fn ring_axioms_small_fields() {
    for (p, f) in prime_powers(27) {
        let k = field(p, f);
        let els: Vec<_> = k.elements().collect();
        for &x in &els {
            assert_eq!(k.add(x, k.neg(x)), k.zero());
            if !x.is_zero() {
                assert_eq!(k.mul(x, k.inv(x).unwrap()), k.one());
            }
            for &y in &els {
                for &z in &els {
                    assert_eq!(k.mul(x, k.add(y, z)), k.add(k.mul(x, y), k.mul(x, z)));
                }
            }
        }
    }
}

#[test]
fn encoding_roundtrip() {
    let k = field(5, 3);
    for x in k.elements() {
        let c = k.coeffs(x);
        assert_eq!(c.len(), 3);
        assert_eq!(k.from_coeffs(&c).unwrap(), x);
        assert_eq!(k.elem(x.encoding() as u64).unwrap(), x);
    }
    assert!(k.elem(125).is_err());
}

fn any_field() -> impl Strategy<Value = (u64, u32)> {
    prop::sample::select(vec![(2, 5), (2, 8), (3, 5), (5, 4), (7, 3), (101, 1), (1009, 1), (3, 9), (2, 12)])
}

proptest! {
    #[test]
    fn field_ops_consistent((p, f) in any_field(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let k = field(p, f);
        let q = k.order();
        let (x, y, z) = (k.elem((a % q) as u64).unwrap(), k.elem((b % q) as u64).unwrap(), k.elem((c % q) as u64).unwrap());
        prop_assert_eq!(k.mul(k.mul(x, y), z), k.mul(x, k.mul(y, z)));
        prop_assert_eq!(k.add(k.add(x, y), z), k.add(x, k.add(y, z)));
        prop_assert_eq!(k.mul(x, k.add(y, z)), k.add(k.mul(x, y), k.mul(x, z)));
        prop_assert_eq!(k.sub(k.add(x, y), y), x);
        if !y.is_zero() {
            prop_assert_eq!(k.mul(k.div(x, y).unwrap(), y), x);
        }
        prop_assert_eq!(k.frobenius(k.mul(x, y), 1), k.mul(k.frobenius(x, 1), k.frobenius(y, 1)));
    }

    #[test]
    fn log_inverts_xi_pow((p, f) in any_field(), k_exp in any::<u64>()) {
        let k = field(p, f);
        let e = k_exp % (k.order() as u64 - 1);
        prop_assert_eq!(k.log(k.xi_pow(e)), Some(e as u32));
    }
}
