use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::poly::MPoly;
use crate::ring::{PolyRing, Rationals};

fn z(n: i64) -> BigInt {
    BigInt::from(n)
}

fn poly_from(nvars: usize, terms: &[(&[u32], i64)]) -> IntPoly {
    let mut p = IntPoly::zero(nvars);
    for (e, c) in terms {
        p.terms.insert(e.to_vec(), z(*c));
    }
    p
}

#[test]
fn universal_sum_and_product_at_p3_n2() {
    let w = witt_universal_polynomials(3, 2).unwrap();
    // variables x0, x1, y0, y1
    assert_eq!(w.sum[0], poly_from(4, &[(&[1, 0, 0, 0], 1), (&[0, 0, 1, 0], 1)]));
    assert_eq!(
        w.sum[1],
        poly_from(4, &[(&[0, 1, 0, 0], 1), (&[0, 0, 0, 1], 1), (&[2, 0, 1, 0], -1), (&[1, 0, 2, 0], -1)])
    );
    assert_eq!(
        w.prod[1],
        poly_from(4, &[(&[3, 0, 0, 1], 1), (&[0, 1, 3, 0], 1), (&[0, 1, 0, 1], 3)])
    );
}

/// Independent check: substitute the universal polynomials into the ghost
/// polynomials over the rationals and compare with the ghost of the inputs.
#[test]
fn universal_polynomials_are_ghost_equivariant_symbolically() {
    for (p, n) in [(3u64, 3usize), (5, 2)] {
        let w = witt_universal_polynomials(p, n).unwrap();
        let nv = 2 * n;
        for i in 0..n {
            let gx = ghost_poly(p, i, nv, 0);
            let gy = ghost_poly(p, i, nv, n);
            let subst = |qs: &[IntPoly]| -> IntPoly {
                let mut acc = IntPoly::zero(nv);
                for (j, q) in qs.iter().enumerate().take(i + 1) {
                    acc = acc.add(&q.pow(p.pow((i - j) as u32)).scale(&BigInt::from(p).pow(j as u32)));
                }
                acc
            };
            assert_eq!(subst(&w.sum), gx.add(&gy));
            assert_eq!(subst(&w.prod), gx.mul(&gy));
        }
    }
}

#[test]
fn negation_polynomials_are_componentwise_for_odd_p() {
    let w = witt_universal_polynomials(3, 3).unwrap();
    for (i, q) in w.neg.iter().enumerate() {
        assert_eq!(*q, IntPoly::var(3, i).scale(&z(-1)));
    }
}

fn f3t(max_degree: u32) -> PolyRing {
    PolyRing::new(Modulus::new(3, 1).unwrap(), 1, max_degree)
}

#[test]
fn teichmuller_square_over_f3() {
    let r = f3t(32);
    let w = WittRing::new(r, 3, 2).unwrap();
    let t = w.teichmuller(r.var(0));
    assert_eq!(w.mul(&t, &t).unwrap(), w.teichmuller(r.var(0).pow(2)));
    let t2 = w.teichmuller(r.var(0).pow(2));
    assert_eq!(w.mul(&t, &t2).unwrap(), w.teichmuller(r.var(0).pow(3)));
}

#[test]
fn product_formula_over_f3() {
    let r = f3t(32);
    let w = WittRing::new(r, 3, 2).unwrap();
    let t = r.var(0);
    let a = w.from_components(vec![t.clone(), t.pow(2)]).unwrap();
    let b = w.from_components(vec![t.add(&r.one()), t.clone()]).unwrap();
    let prod = w.mul(&a, &b).unwrap();
    let expect1 = a.comps[0].pow(3).mul(&b.comps[1]).add(&b.comps[0].pow(3).mul(&a.comps[1]));
    assert_eq!(prod.comps, vec![a.comps[0].mul(&b.comps[0]), expect1]);
}

#[test]
fn integers_in_w2_f3() {
    let f3 = ZMod::new(Modulus::new(3, 1).unwrap());
    let w = WittRing::new(f3, 3, 2).unwrap();
    let one = w.one();
    let mut acc = w.zero();
    for _ in 0..3 {
        acc = w.add(&acc, &one).unwrap();
    }
    assert_eq!(acc.comps, vec![0, 1]);
    let mut acc9 = w.zero();
    for _ in 0..9 {
        acc9 = w.add(&acc9, &one).unwrap();
    }
    assert_eq!(acc9.comps, vec![0, 0]);
    assert_eq!(w.from_int(&z(3)).unwrap().comps, vec![0, 1]);
}

#[test]
fn witt_vectors_of_fp_are_cyclic() {
    assert_eq!(witt_fp_invariant_factors(3, 1).unwrap(), vec![1]);
    assert_eq!(witt_fp_invariant_factors(3, 2).unwrap(), vec![2]);
    assert_eq!(witt_fp_invariant_factors(3, 3).unwrap(), vec![3]);
    assert_eq!(witt_fp_invariant_factors(5, 2).unwrap(), vec![2]);
}

#[test]
fn verschiebung_and_frobenius_examples() {
    let f3 = ZMod::new(Modulus::new(3, 1).unwrap());
    let w1 = WittRing::new(f3, 3, 1).unwrap();
    assert_eq!(w1.verschiebung(&w1.one()).unwrap().comps, vec![0, 1]);

    let r = f3t(32);
    let w1 = WittRing::new(r, 3, 1).unwrap();
    let w2 = WittRing::new(r, 3, 2).unwrap();
    let vt = w1.verschiebung(&w1.teichmuller(r.var(0))).unwrap();
    assert!(w2.is_zero(&w2.frobenius(&vt).unwrap()));
    let ft = w2.frobenius(&w2.teichmuller(r.var(0))).unwrap();
    assert_eq!(ft.comps, vec![r.var(0).pow(3)]);
    assert_eq!(w2.frobenius_universal(&w2.teichmuller(r.var(0))).unwrap(), ft);
}

#[test]
fn ghost_examples() {
    let w = WittRing::new(Integers, 3, 2).unwrap();
    let v = w.from_components(vec![z(1), z(1)]).unwrap();
    assert_eq!(w.ghost(&v).unwrap(), vec![z(1), z(4)]);
    assert_eq!(w.from_ghost(&[z(0), z(3)]).unwrap().comps, vec![z(0), z(1)]);
    assert_eq!(w.from_ghost(&[z(0), z(1)]).unwrap_err(), WittError::NotInImage);
    let t = w.teichmuller(z(2));
    assert_eq!(w.ghost(&t).unwrap(), vec![z(2), z(8)]);
}

#[test]
fn mixed_lengths_are_rejected() {
    let w2 = WittRing::new(Integers, 3, 2).unwrap();
    let w3 = WittRing::new(Integers, 3, 3).unwrap();
    assert!(matches!(w2.add(&w2.one(), &w3.one()), Err(WittError::MixedLength { .. })));
    let w1 = WittRing::new(Integers, 3, 1).unwrap();
    assert_eq!(w1.frobenius(&w1.one()).unwrap_err(), WittError::LengthUnderflow);
}

#[test]
fn truncation_overflow_is_an_error() {
    let r = f3t(4);
    let w = WittRing::new(r, 3, 2).unwrap();
    let t = w.teichmuller(r.var(0).pow(2));
    let a = w.from_components(vec![r.var(0).pow(2), r.var(0)]).unwrap();
    assert!(matches!(w.mul(&t, &a), Err(WittError::Ring(RingError::TruncationOverflow { .. }))));
}

#[test]
fn cache_json_round_trip() {
    let w = witt_universal_polynomials(3, 2).unwrap();
    let j = w.to_json();
    assert_eq!(WittPolys::from_json(&j).unwrap(), *w);
    assert_eq!(w.cache_key(), "witt-polys/p3-n2-v1");
}

#[test]
fn rationals_agree_with_integers() {
    let wq = WittRing::new(Rationals, 3, 2).unwrap();
    let a = wq.from_components(vec![BigRational::from_integer(z(2)), BigRational::from_integer(z(5))]).unwrap();
    let g = wq.ghost(&a).unwrap();
    assert_eq!(wq.from_ghost(&g).unwrap(), a);
}

fn int_vec(n: usize) -> impl Strategy<Value = Vec<BigInt>> {
    proptest::collection::vec(-20i64..20, n).prop_map(|v| v.into_iter().map(BigInt::from).collect())
}

fn poly_elem(max_deg: u32) -> impl Strategy<Value = MPoly> {
    proptest::collection::vec(0u64..3, (max_deg + 1) as usize).prop_map(|cs| {
        let m = Modulus::new(3, 1).unwrap();
        MPoly::from_terms(m, 1, cs.into_iter().enumerate().map(|(i, c)| (vec![i as u32], c)))
    })
}

fn poly_witt(n: usize) -> impl Strategy<Value = Vec<MPoly>> {
    proptest::collection::vec(poly_elem(2), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ghost_round_trip(a in int_vec(3)) {
        let w = WittRing::new(Integers, 3, 3).unwrap();
        let v = w.from_components(a).unwrap();
        prop_assert_eq!(w.from_ghost(&w.ghost(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn ghost_equivariance_over_integers(a in int_vec(3), b in int_vec(3)) {
        let w = WittRing::new(Integers, 3, 3).unwrap();
        let a = w.from_components(a).unwrap();
        let b = w.from_components(b).unwrap();
        let ga = w.ghost(&a).unwrap();
        let gb = w.ghost(&b).unwrap();
        let gs = w.ghost(&w.add(&a, &b).unwrap()).unwrap();
        let gp = w.ghost(&w.mul(&a, &b).unwrap()).unwrap();
        let gn = w.ghost(&w.neg(&a).unwrap()).unwrap();
        for i in 0..3 {
            prop_assert_eq!(&gs[i], &(&ga[i] + &gb[i]));
            prop_assert_eq!(&gp[i], &(&ga[i] * &gb[i]));
            prop_assert_eq!(&gn[i], &(-&ga[i]));
        }
        let gf = WittRing::new(Integers, 3, 2).unwrap().ghost(&w.frobenius(&a).unwrap()).unwrap();
        prop_assert_eq!(&gf[..], &ga[1..]);
        let gv = WittRing::new(Integers, 3, 4).unwrap().ghost(&w.verschiebung(&a).unwrap()).unwrap();
        prop_assert_eq!(&gv[0], &z(0));
        for i in 0..3 {
            prop_assert_eq!(&gv[i + 1], &(&ga[i] * 3));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn identities_over_f3t(a in poly_witt(2), b in poly_witt(3), c in poly_witt(3)) {
        let r = f3t(64);
        let w2 = WittRing::new(r, 3, 2).unwrap();
        let w3 = WittRing::new(r, 3, 3).unwrap();
        let a = w2.from_components(a).unwrap();
        let b = w3.from_components(b).unwrap();
        let c = w3.from_components(c).unwrap();
        // FV = p
        let fva = w3.frobenius(&w2.verschiebung(&a).unwrap()).unwrap();
        prop_assert_eq!(fva, w2.scale_int(&z(3), &a).unwrap());
        // V(a) b = V(a F b)
        let lhs = w3.mul(&w2.verschiebung(&a).unwrap(), &b).unwrap();
        let rhs = w2.verschiebung(&w2.mul(&a, &w3.frobenius(&b).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // F is a ring map, and the fast path matches the universal one
        let fb = w3.frobenius(&b).unwrap();
        let fc = w3.frobenius(&c).unwrap();
        prop_assert_eq!(&fb, &w3.frobenius_universal(&b).unwrap());
        prop_assert_eq!(w3.frobenius(&w3.mul(&b, &c).unwrap()).unwrap(), w2.mul(&fb, &fc).unwrap());
        prop_assert_eq!(w3.frobenius(&w3.add(&b, &c).unwrap()).unwrap(), w2.add(&fb, &fc).unwrap());
        // Teichmüller multiplicative
        let ta = w3.teichmuller(a.comps[0].clone());
        let tb = w3.teichmuller(b.comps[0].clone());
        prop_assert_eq!(w3.mul(&ta, &tb).unwrap(), w3.teichmuller(a.comps[0].mul(&b.comps[0])));
        prop_assert_eq!(w3.neg_universal(&b).unwrap(), w3.neg(&b).unwrap());
    }

    #[test]
    fn identities_over_z9(a in proptest::collection::vec(0u64..9, 2), b in proptest::collection::vec(0u64..9, 3), c in proptest::collection::vec(0u64..9, 3)) {
        let r = ZMod::new(Modulus::new(3, 2).unwrap());
        let w2 = WittRing::new(r, 3, 2).unwrap();
        let w3 = WittRing::new(r, 3, 3).unwrap();
        let a = w2.from_components(a).unwrap();
        let b = w3.from_components(b).unwrap();
        let c = w3.from_components(c).unwrap();
        let fva = w3.frobenius(&w2.verschiebung(&a).unwrap()).unwrap();
        prop_assert_eq!(fva, w2.scale_int(&z(3), &a).unwrap());
        let lhs = w3.mul(&w2.verschiebung(&a).unwrap(), &b).unwrap();
        let rhs = w2.verschiebung(&w2.mul(&a, &w3.frobenius(&b).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let fb = w3.frobenius(&b).unwrap();
        let fc = w3.frobenius(&c).unwrap();
        prop_assert_eq!(w3.frobenius(&w3.mul(&b, &c).unwrap()).unwrap(), w2.mul(&fb, &fc).unwrap());
        prop_assert_eq!(w3.frobenius(&w3.add(&b, &c).unwrap()).unwrap(), w2.add(&fb, &fc).unwrap());
        let ta = w3.teichmuller(a.comps[0]);
        let tb = w3.teichmuller(b.comps[0]);
        prop_assert_eq!(w3.mul(&ta, &tb).unwrap(), w3.teichmuller(a.comps[0] * b.comps[0] % 9));
        // ring axioms
        prop_assert_eq!(w3.mul(&b, &c).unwrap(), w3.mul(&c, &b).unwrap());
        prop_assert_eq!(w3.mul(&b, &w3.one()).unwrap(), b.clone());
        prop_assert!(w3.is_zero(&w3.add(&b, &w3.neg(&b).unwrap()).unwrap()));
    }
}

#[test]
fn axioms_check_passes() {
    for (p, n) in [(3, 1), (3, 3), (5, 2)] {
        let r = witt_axioms_check(p, n, 20, 7).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }
    assert!(witt_axioms_check(2, 2, 1, 0).is_err());
}
