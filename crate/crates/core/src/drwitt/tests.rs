use proptest::prelude::*;

use super::*;

fn ctx(p: u64, m: usize, levels: u32) -> DrwContext {
    DrwContext::new(p, m, levels).unwrap()
}

fn t(level: u32, exp: &[u32]) -> WittMonomial {
    WittMonomial::new(level, exp.to_vec())
}

#[test]
fn small_pieces() {
    let c = ctx(3, 1, 3);
    let w2 = c.weight(vec![2], 0);
    let m = c.weight_module(1, 1, &w2).unwrap();
    assert_eq!(m.invariant_factors(), vec![1]);
    let m = c.weight_module(2, 0, &c.weight(vec![1], 0)).unwrap();
    assert_eq!(m.length(), 2);
    assert_eq!(m.invariant_factors(), vec![2]);
    let c2 = ctx(3, 2, 2);
    let m = c2.weight_module(1, 0, &c2.weight(vec![1, 1], 0)).unwrap();
    assert_eq!(m.invariant_factors(), vec![1]);
    // fractional weights vanish at level 1
    assert!(c.weight_module(1, 0, &c.weight(vec![1], 1)).unwrap().module.is_zero());
}

#[test]
fn level_and_degree_errors() {
    let c = ctx(3, 1, 2);
    let w = c.weight(vec![1], 0);
    assert!(matches!(c.weight_module(3, 0, &w), Err(DrwError::LevelOverflow { .. })));
    assert!(matches!(c.weight_module(0, 0, &w), Err(DrwError::LevelUnderflow)));
    assert!(matches!(c.weight_module(1, 2, &w), Err(DrwError::DegreeOverflow { .. })));
    assert!(matches!(c.frobenius(&c.one(1)), Err(DrwError::LevelUnderflow)));
    assert!(matches!(c.verschiebung(&c.one(2)), Err(DrwError::LevelOverflow { .. })));
    assert!(DrwContext::new(2, 1, 1).is_err());
}

/// The Witt vectors of `F_p[t_1..t_m]` in weight `k`: slot `i` holds the
/// monomial of multidegree `p^i k` when that is integral.
fn witt_slot_count(k: &WittWeight, n: u32) -> u32 {
    (0..n).filter(|&i| i >= k.den_exp()).count() as u32
}

#[test]
fn degree_zero_matches_witt_vector_slots() {
    for (p, m) in [(3u64, 1usize), (3, 2), (5, 1)] {
        let c = ctx(p, m, 3);
        for n in 1..=3 {
            for k in WittWeight::enumerate(p, m, 2, 2) {
                let module = c.weight_module(n, 0, &k).unwrap();
                assert_eq!(module.length(), witt_slot_count(&k, n), "p={p} m={m} n={n} k={k}");
                if !module.module.is_zero() {
                    assert_eq!(module.invariant_factors().len(), 1, "weight pieces of W_n are cyclic");
                }
            }
        }
    }
}

#[test]
fn symbols_span_each_piece() {
    for (p, m, n, bound) in [(3u64, 1usize, 3u32, 2u64), (3, 2, 2, 2), (5, 2, 2, 1)] {
        let c = ctx(p, m, n);
        for k in WittWeight::enumerate(p, m, n - 1, bound) {
            for q in 0..=m {
                let module = c.weight_module(n, q, &k).unwrap();
                if module.module.is_zero() {
                    continue;
                }
                let mut rows = module.filtration.clone();
                for s in spanning_symbols(p, n, q, &k) {
                    assert_eq!(s.weight(p, m), k);
                    let e = s.to_element(&c, n).unwrap();
                    rows.push(e.parts.get(&k).cloned().unwrap_or_else(|| vec![0; module.dim()]));
                }
                assert!(c.same_span(module.dim(), &rows, &module.lattice), "p={p} n={n} q={q} k={k}");
            }
        }
    }
}

#[test]
fn kahler_pieces_at_level_one() {
    let r = kahler_comparison(&ctx(3, 2, 1), 5).unwrap();
    assert!(r.passed(), "{:?}", r.mismatches);
    let r = kahler_comparison(&ctx(5, 1, 1), 7).unwrap();
    assert!(r.passed(), "{:?}", r.mismatches);
}

#[test]
fn named_identities() {
    let c = ctx(3, 1, 3);
    let s = |sym: DrwSymbol, n| sym.to_element(&c, n).unwrap();
    // F dV[t] = d[t]
    let lhs = c.frobenius(&c.d(&s(DrwSymbol::function(t(1, &[1])), 2)).unwrap()).unwrap();
    assert!(c.equal(&lhs, &s(DrwSymbol::exact(t(0, &[1])), 1)).unwrap());
    // F d[t] = [t]^{p-1} d[t]
    let lhs = c.frobenius(&s(DrwSymbol::exact(t(0, &[1])), 2)).unwrap();
    let rhs = s(DrwSymbol::new(1, vec![t(0, &[2])], vec![t(0, &[1])]), 1);
    assert!(c.equal(&lhs, &rhs).unwrap());
    // V d[t] = p dV[t]
    let lhs = c.verschiebung(&s(DrwSymbol::exact(t(0, &[1])), 1)).unwrap();
    let rhs = s(DrwSymbol::exact(t(1, &[1])), 2).scale(3);
    assert!(c.equal(&lhs, &rhs).unwrap());
    // both sides vanish: p dV[t] = dV(VF[t]) = dV^2[t^p] = 0 in W_2
    assert!(c.is_zero(&lhs).unwrap());
    // V[t^p] · [t] = V[t^{2p}]
    let lhs = s(DrwSymbol::new(1, vec![t(1, &[3]), t(0, &[1])], vec![]), 2);
    assert!(c.equal(&lhs, &s(DrwSymbol::function(t(1, &[6])), 2)).unwrap());
    let c2 = ctx(3, 2, 2);
    let dt1 = DrwSymbol::exact(t(0, &[1, 0]));
    assert!(c2.is_zero(&dt1.mul(&dt1).to_element(&c2, 2).unwrap()).unwrap());
    let a = DrwSymbol::function(t(0, &[1, 0])).to_element(&c2, 2).unwrap();
    let b = DrwSymbol::exact(t(0, &[0, 1])).to_element(&c2, 2).unwrap();
    let prod = DrwSymbol::new(1, vec![t(0, &[1, 0])], vec![t(0, &[0, 1])]).to_element(&c2, 2).unwrap();
    assert!(c2.equal(&c2.mul(&a, &b).unwrap(), &prod).unwrap());
}

#[test]
fn relation_schema_vanishes() {
    for (p, m, n, bound) in [(3u64, 1usize, 3u32, 3u64), (3, 2, 2, 2), (5, 2, 2, 1)] {
        let c = ctx(p, m, n);
        let rels = relation_schema(p, m, n, bound);
        let kinds = [
            RelationKind::TeichmullerProduct,
            RelationKind::Leibniz,
            RelationKind::WittAddition,
            RelationKind::VTimesDV,
            RelationKind::VdEqualsPdV,
        ];
        // weight 1 is too small for a higher-level monomial next to a Teichmüller one
        for kind in kinds.into_iter().filter(|_| bound >= 2) {
            assert!(rels.iter().any(|r| r.kind == kind), "no instance of {kind:?}");
        }
        for r in &rels {
            let e = combination_to_element(&c, n, &r.terms).unwrap();
            assert!(c.is_zero(&e).unwrap(), "{r:?}");
        }
    }
}

#[test]
fn symbol_calculus_matches_model() {
    let (p, m, n) = (3u64, 2usize, 3u32);
    let c = ctx(p, m, n);
    let top = c.weight(vec![2, 1], 0);
    let pool: Vec<WittMonomial> = monomials_below(p, 2, &top);
    let mut syms = Vec::new();
    for x in &pool {
        for y in &pool {
            if !y.is_constant() {
                syms.push(DrwSymbol::new(1, vec![x.clone()], vec![y.clone()]));
            }
        }
        syms.push(DrwSymbol::function(x.clone()));
    }
    for s in &syms {
        let e2 = s.to_element(&c, 2).unwrap();
        let f = c.frobenius(&e2).unwrap();
        assert!(c.equal(&f, &s.frobenius(p).to_element(&c, 1).unwrap()).unwrap(), "F {s:?}");
        let v = c.verschiebung(&e2).unwrap();
        assert!(c.equal(&v, &s.verschiebung(p, m).to_element(&c, 3).unwrap()).unwrap(), "V {s:?}");
        let d = c.d(&e2).unwrap();
        let formal = combination_to_element(&c, 2, &s.d()).unwrap();
        if s.d().is_empty() {
            assert!(c.is_zero(&d).unwrap());
        } else {
            assert!(c.equal(&d, &formal).unwrap(), "d {s:?}");
        }
        let r = c.restrict(&s.to_element(&c, 3).unwrap()).unwrap();
        assert!(c.equal(&r, &e2).unwrap());
    }
}

#[test]
fn illusie_sequence_is_exact() {
    for (p, m, n, bound) in [(3u64, 1usize, 1u32, 3u64), (3, 1, 2, 3), (3, 2, 1, 3), (3, 2, 2, 2), (5, 1, 2, 2)] {
        let c = ctx(p, m, n + 1);
        let r = illusie_exactness(&c, n, &illusie_window(p, m, n, bound)).unwrap();
        assert!(r.passed(), "p={p} m={m} n={n}: {:?}", r.failures());
        // zero weight: 0 → Z/p → Z/p^{n+1} → Z/p^n → 0
        let z: Vec<_> = r.nodes.iter().filter(|x| x.weight.is_zero() && x.q == 0).map(|x| x.length).collect();
        assert_eq!(z, vec![1, n + 1, n]);
    }
}

fn element(c: &DrwContext, n: u32) -> impl Strategy<Value = DrwElement> + '_ {
    let m = c.rank();
    proptest::collection::vec(
        (0u32..n, proptest::collection::vec(0u32..4, m), proptest::option::of((0u32..n, proptest::collection::vec(0u32..4, m))), -4i64..5),
        1..4,
    )
    .prop_map(move |terms| {
        let mut acc0 = c.zero(n, 0);
        let mut acc1 = c.zero(n, 1);
        for (s, a, dy, k) in terms {
            match dy {
                Some((u, b)) if b.iter().any(|x| *x > 0) => {
                    let sym = DrwSymbol::new(k, vec![WittMonomial::new(s, a)], vec![WittMonomial::new(u, b)]);
                    acc1 = acc1.add(&sym.to_element(c, n).unwrap());
                }
                _ => {
                    let sym = DrwSymbol::new(k, vec![WittMonomial::new(s, a)], vec![]);
                    acc0 = acc0.add(&sym.to_element(c, n).unwrap());
                }
            }
        }
        if acc1.parts.is_empty() {
            acc0
        } else {
            acc1
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn operator_relations(x in element(&CTX, 2), y in element(&CTX, 3)) {
        let c = &*CTX;
        let p = c.p();
        let vx = c.verschiebung(&x).unwrap();
        let fx = c.frobenius(&x).unwrap();
        let dx = c.d(&x).unwrap();
        // FV = p and VF = p
        prop_assert!(c.equal(&c.frobenius(&vx).unwrap(), &x.scale(p)).unwrap());
        prop_assert!(c.equal(&c.verschiebung(&fx).unwrap(), &x.scale(p)).unwrap());
        // d² = 0, FdV = d, Vd = p dV, dF = p Fd
        prop_assert!(c.is_zero(&c.d(&dx).unwrap()).unwrap());
        prop_assert!(c.equal(&c.frobenius(&c.d(&vx).unwrap()).unwrap(), &dx).unwrap());
        prop_assert!(c.equal(&c.verschiebung(&dx).unwrap(), &c.d(&vx).unwrap().scale(p)).unwrap());
        prop_assert!(c.equal(&c.d(&fx).unwrap(), &c.frobenius(&dx).unwrap().scale(p)).unwrap());
        // restriction commutes with d, F, V
        let rx = c.restrict(&x).unwrap();
        let ry = c.restrict(&y).unwrap();
        prop_assert!(c.equal(&c.restrict(&dx).unwrap(), &c.d(&rx).unwrap()).unwrap());
        prop_assert!(c.equal(&c.restrict(&vx).unwrap(), &c.verschiebung(&rx).unwrap()).unwrap());
        prop_assert!(c.equal(&c.restrict(&c.frobenius(&y).unwrap()).unwrap(), &c.frobenius(&ry).unwrap()).unwrap());
        if x.q + y.q <= c.rank() {
            // V(x F y) = V(x) y
            let lhs = c.verschiebung(&c.mul(&x, &c.frobenius(&y).unwrap()).unwrap()).unwrap();
            prop_assert!(c.equal(&lhs, &c.mul(&vx, &y).unwrap()).unwrap());
            // graded commutativity and Leibniz
            let xy = c.mul(&x, &ry).unwrap();
            let sign = if x.q * y.q % 2 == 1 { -1 } else { 1 };
            prop_assert!(c.equal(&xy, &c.mul(&ry, &x).unwrap().scale_i64(sign)).unwrap());
            if x.q + y.q < c.rank() {
                let s = if x.q % 2 == 1 { -1 } else { 1 };
                let rhs = c.mul(&dx, &ry).unwrap().add(&c.mul(&x, &c.d(&ry).unwrap()).unwrap().scale_i64(s));
                prop_assert!(c.equal(&c.d(&xy).unwrap(), &rhs).unwrap());
            }
        }
    }
}

static CTX: std::sync::LazyLock<DrwContext> = std::sync::LazyLock::new(|| ctx(3, 2, 3));
