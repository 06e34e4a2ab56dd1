use proptest::prelude::*;

use super::*;
use crate::drwitt::{DrwSymbol, WittMonomial};
use crate::weyl::{center_basis, divided_bracket, NcPoly};
use crate::zmod::Modulus;

fn md(p: u64, e: u32) -> Modulus {
    Modulus::new(p, e).unwrap()
}

fn mono(m: Modulus, a: u32, b: u32, c: u64) -> NcPoly {
    NcPoly::monomial(m, WORKING_DEGREE, a, b, c)
}

#[test]
fn koszul_differential_matches_commutators() {
    let m = md(3, 2);
    let x = NcPoly::x(m, WORKING_DEGREE);
    let y = NcPoly::y(m, WORKING_DEGREE);
    let a = mono(m, 4, 2, 5).add(&mono(m, 1, 3, 7)).unwrap();
    let d = KoszulCochain::scalar(a.clone()).delta();
    assert_eq!(d.comps[0], a.commutator(&x).unwrap());
    assert_eq!(d.comps[1], a.commutator(&y).unwrap());
    let u = mono(m, 2, 5, 1);
    let v = mono(m, 3, 1, 4);
    let d1 = KoszulCochain::one_cochain(u.clone(), v.clone()).delta();
    let expected = x.commutator(&v).unwrap().sub(&y.commutator(&u).unwrap()).unwrap();
    assert_eq!(d1.comps[0], expected);
    assert!(d.delta().is_zero());
}

#[test]
fn center_and_hkr_dimensions() {
    // HH^0(A_1) per degree against the independently computed center.
    let h0 = hh(3, 1, 0, 9).unwrap();
    let center = center_basis(3, 1, 9).unwrap();
    let by_degree = h0.length_by_degree();
    assert_eq!(&by_degree[..4], &[1, 0, 0, 2]);
    assert_eq!(by_degree.iter().sum::<u32>(), center.length());

    // Ω^q of F_3[u, v] has dimension C(2, q) (w - q + 1) in weight w.
    let binom = [1usize, 2, 1];
    for q in 0..=2 {
        let h = hh(3, 1, q, 12).unwrap().length_by_degree();
        for (d, len) in h.iter().enumerate() {
            let expected = if d % 3 == 0 && d / 3 >= q { binom[q] * (d / 3 - q + 1) } else { 0 };
            assert_eq!(*len as usize, expected, "q = {q}, degree {d}");
        }
    }
    assert!(hh(3, 1, 0, 0).unwrap().length() == 1);
}

#[test]
fn hkr_base_case() {
    let r = hkr_check(3, 12, 2).unwrap();
    assert!(r.passed(), "{:?} {:?}", r.mismatches, r.formula_failures);
    assert!(r.formula_instances >= 36);
}

#[test]
fn named_bockstein_values() {
    let m = md(3, 1);
    // d_1(x^3) = ((1/3)[x^3, x], (1/3)[x^3, y]) = (0, -x^2).
    let d = bockstein(&KoszulCochain::scalar(mono(m, 3, 0, 1))).unwrap();
    assert!(d.comps[0].is_zero());
    assert_eq!(d.comps[1], mono(m, 2, 0, 2));
    // d_1(y^3) = (y^2, 0) from [y^3, x] = 3y^2.
    let d = bockstein(&KoszulCochain::scalar(mono(m, 0, 3, 1))).unwrap();
    let m2 = md(3, 2);
    let oracle = divided_bracket(&mono(m2, 0, 3, 1), &NcPoly::x(m2, WORKING_DEGREE), 1).unwrap();
    assert_eq!(d.comps[0], oracle.reduce_to(1).unwrap().with_max_degree(WORKING_DEGREE));
    assert_eq!(d.comps[0], mono(m, 0, 2, 1));
    assert!(d.comps[1].is_zero());
    assert!(bockstein(&KoszulCochain::scalar(NcPoly::one(m, WORKING_DEGREE))).unwrap().is_zero());

    // v̄ and r̄ on explicit classes.
    let one = KoszulCochain::scalar(NcPoly::one(m, WORKING_DEGREE));
    assert_eq!(vbar(1, &one).unwrap().comps[0], NcPoly::constant(m2, WORKING_DEGREE, 3));
    let x9 = KoszulCochain::scalar(mono(m2, 9, 0, 1));
    assert_eq!(rbar(1, &x9).unwrap().comps[0], mono(m, 9, 0, 1));
    assert_eq!(rbar(2, &x9), Err(HochError::LevelBounds(0)));
    assert_eq!(bockstein(&KoszulCochain::scalar(mono(m, 1, 0, 1))), Err(HochError::NotCocycle));
}

#[test]
fn bockstein_is_independent_of_lift_and_squares_to_zero() {
    let h = hh(3, 2, 0, 18).unwrap();
    let h1 = hh(3, 2, 1, 18).unwrap();
    let h2 = hh(3, 2, 2, 18).unwrap();
    let m4 = md(3, 4);
    let perturb = [
        KoszulCochain::scalar(mono(m4, 2, 1, 1)),
        KoszulCochain::scalar(mono(m4, 0, 5, 2).add(&mono(m4, 3, 3, 1)).unwrap()),
    ];
    let mut checked = 0;
    for (_, c) in h.generators().into_iter().chain(h1.generators()) {
        let target = if c.q == 0 { &h1 } else { &h2 };
        let base = bockstein(&c).unwrap();
        for e in &perturb {
            let e = if c.q == 0 {
                e.clone()
            } else {
                KoszulCochain::one_cochain(e.comps[0].clone(), e.comps[0].scale(2))
            };
            if (e.comps[0].degree() as u32) + 2 > 18 {
                continue;
            }
            let other = bockstein_with_lift(&c, &e).unwrap();
            assert!(target.same_class(&base, &other).unwrap());
            checked += 1;
        }
        if c.q == 0 {
            assert!(h2.is_zero_class(&bockstein(&base).unwrap()).unwrap());
        }
    }
    assert!(checked > 20);
}

#[test]
fn cup_is_independent_of_the_bar_lift() {
    let m = md(3, 2);
    let h1 = hh(3, 2, 1, 15).unwrap();
    let h2 = hh(3, 2, 2, 15).unwrap();
    let gens: Vec<KoszulCochain> = h1.generators().into_iter().map(|(_, c)| c).take(6).collect();
    let chain = relation_chain(m);
    let perturbed = perturb_chain(
        &chain,
        &[
            NcPoly::one(m, WORKING_DEGREE),
            mono(m, 1, 0, 1),
            mono(m, 0, 1, 2),
            mono(m, 1, 1, 1),
            NcPoly::one(m, WORKING_DEGREE),
        ],
    )
    .unwrap();
    for a in &gens {
        for b in &gens {
            let c = cup(a, b).unwrap();
            assert_eq!(c, cup_on_chain(a, b, &chain).unwrap());
            let c2 = cup_on_chain(a, b, &perturbed).unwrap();
            if c.comps[0].degree() + 6 <= 15 {
                assert!(h2.same_class(&c, &c2).unwrap());
            }
        }
    }
    // Unit.
    let one = KoszulCochain::scalar(NcPoly::one(m, WORKING_DEGREE));
    assert_eq!(cup(&gens[0], &one).unwrap(), gens[0]);
}

#[test]
fn phi_star_small_values() {
    let e = PhiEngine::new();
    let m = md(3, 1);
    let du = DrwSymbol::exact(WittMonomial::teichmuller(vec![1, 0]));
    let c = e.phi_star(3, 1, &du).unwrap();
    assert!(c.comps[0].is_zero());
    assert_eq!(c.comps[1], mono(m, 2, 0, 2));
    let unit = e.phi_star(3, 2, &DrwSymbol::function(WittMonomial::one(2))).unwrap();
    assert_eq!(unit.comps[0], NcPoly::one(md(3, 2), WORKING_DEGREE));
}

#[test]
fn sv_identity() {
    let r = sv_identity_check(3, 1, &[(1, 0), (0, 1), (1, 1), (0, 0)]).unwrap();
    assert!(r.passed(), "{:?}", r.cases);
}

#[test]
fn delta_exponent_is_n_minus_one() {
    let r = delta_exponent_check(3, &[1, 2], 18).unwrap();
    assert_eq!(r.resolved_exponent.as_deref(), Some("n-1"));
    assert!(r.cases.iter().any(|c| c.n == 2 && !c.matches_n));
}

#[test]
fn long_exact_sequence() {
    for n in 1..=2 {
        let r = les_check(3, n, 20).unwrap();
        assert!(r.passed(), "n = {n}: {:?}", r.failures());
    }
}

#[test]
fn bockstein_identities_on_test_algebra() {
    let alg = TestAlgebra::new(3, 3);
    for q in 0..=2 {
        let d0 = alg.delta_matrix(q, 2).unwrap();
        let d1 = alg.delta_matrix(q + 1, 2).unwrap();
        assert!(d0.mul(&d1).unwrap().is_zero());
    }
    for n in 1..=2 {
        let r = lemma_identities_check(3, 3, n).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }
}

#[test]
fn hh_matches_drw_small_windows() {
    let r = theorem1_check(3, 1, 3, 1).unwrap();
    assert!(r.passed(), "{}", serde_json::to_string(&r).unwrap());
    let r = theorem1_check(3, 2, 1, 1).unwrap();
    assert!(r.passed(), "{}", serde_json::to_string(&r).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn rbar_vbar_is_p(a in 0u32..4, b in 0u32..4, c in 1u64..9) {
        let m = md(3, 2);
        let z = KoszulCochain::scalar(mono(m, 3 * a, 3 * b, c));
        let lhs = rbar(1, &vbar(1, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, z.scale(3));
    }
}
