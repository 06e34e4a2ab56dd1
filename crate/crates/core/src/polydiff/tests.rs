use proptest::prelude::*;

use super::*;

fn f3() -> Modulus {
    Modulus::new(3, 1).unwrap()
}

fn var(i: usize) -> MPoly {
    MPoly::var(f3(), 2, i)
}

#[test]
fn d_examples() {
    let m = f3();
    let t = MPoly::var(m, 1, 0);
    assert_eq!(d_function(&t), DiffForm::dt(m, 1, 0));
    assert!(d_function(&t.pow(3)).is_zero());
    // d(uv du) = -u du∧dv
    let (u, v) = (var(0), var(1));
    let w = DiffForm::monomial_form(u.mul(&v), &[0]);
    let expect = DiffForm::monomial_form(u.neg(), &[0, 1]);
    assert_eq!(w.de_rham_d().unwrap(), expect);
}

#[test]
fn wedge_is_antisymmetric_on_one_forms() {
    let m = f3();
    let du = DiffForm::dt(m, 2, 0);
    let dv = DiffForm::dt(m, 2, 1);
    assert_eq!(du.wedge(&dv).unwrap(), dv.wedge(&du).unwrap().neg());
    assert!(du.wedge(&du).unwrap().is_zero());
}

#[test]
fn cartier_examples() {
    let m = f3();
    let t = MPoly::var(m, 1, 0);
    let one = MPoly::constant(m, 1, 1);
    assert_eq!(cartier_inverse_fdg(&one, &t), DiffForm::monomial_form(t.pow(2), &[0]));
    assert_eq!(cartier_inverse_fdg(&t, &t), DiffForm::monomial_form(t.pow(5), &[0]));
    let w = DiffForm::monomial_form(t.clone(), &[0]);
    assert_eq!(cartier_inverse(&w).unwrap(), DiffForm::monomial_form(t.pow(5), &[0]));
}

#[test]
fn cartier_rewritings_agree_modulo_exact_forms() {
    // f dg with g = u^2 v against its expansion f(2uv du + u^2 dv)
    let m = f3();
    let (u, v) = (var(0), var(1));
    let f = u.add(&v.pow(2));
    let g = u.pow(2).mul(&v);
    let direct = cartier_inverse_fdg(&f, &g);
    let expanded = cartier_inverse(&d_function(&g).mul_function(&f)).unwrap();
    let diff = direct.sub(&expanded).unwrap();
    assert!(diff.is_closed());
    // a closed 1-form is exact in a multidegree iff it lies in the span of d(t^b)
    for b in diff.multidegrees() {
        let c = form_coordinates(&diff, &b);
        let e = form_coordinates(&d_function(&MPoly::monomial(m, &b, 1)), &b);
        let rows = vec![e.clone(), c.clone()];
        let rank = howell_form(&ZModMatrix::from_rows(m, c.len(), &rows).unwrap()).rank();
        let e_rank = usize::from(e.iter().any(|x| *x != 0));
        assert_eq!(rank, e_rank, "non-exact difference in multidegree {b:?}");
    }
}

#[test]
fn cartier_injective_small_windows() {
    let r = cartier_injectivity_check(3, 1, 6).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.forms_checked, 7);
    let r = cartier_injectivity_check(5, 2, 4).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn de_rham_cohomology_follows_cartier() {
    // H^q in multidegree b is Ω^q in b/p when p | b, zero otherwise
    for b in multidegrees_up_to(2, 7) {
        for q in 0..=2 {
            let h = de_rham_cohomology_dim(3, &b, q).unwrap();
            let expect = if b.iter().all(|x| x % 3 == 0) {
                let a: Vec<u32> = b.iter().map(|x| x / 3).collect();
                multidegree_basis(&a, q).len()
            } else {
                0
            };
            assert_eq!(h, expect, "b={b:?} q={q}");
        }
    }
}

#[test]
fn bracket_examples() {
    let (u, v) = (var(0), var(1));
    let one = MPoly::constant(f3(), 2, 1);
    assert_eq!(poisson_bracket(&u, &v).unwrap(), one);
    assert_eq!(poisson_bracket(&u.pow(2), &v).unwrap(), u.scale(2));
    assert!(poisson_bracket(&u, &u).unwrap().is_zero());
    assert!(matches!(poisson_bracket(&MPoly::var(f3(), 1, 0), &MPoly::var(f3(), 1, 0)), Err(PolydiffError::OddDimension(1))));
}

#[test]
fn tau_examples() {
    let (u, v) = (var(0), var(1));
    let zero = MPoly::zero(f3(), 2);
    assert!(tau_is_zero(&[u.pow(3), zero.clone()]).unwrap());
    assert!(!tau_is_zero(&[u.clone()]).unwrap());
    let t = tau(&[u.clone(), v.clone()]).unwrap();
    // values on (u, v)
    assert_eq!(t[0], MPoly::constant(f3(), 2, 1).neg());
    assert_eq!(t[1], u.pow(2));
    assert!(tau_is_zero(&[u.pow(3), v.pow(3)]).unwrap());
    assert!(!tau_is_zero(&[u, zero]).unwrap());
}

#[test]
fn tau_kernel_both_directions() {
    let r = tau_kernel_check(3, 4, 2, 300, 7).unwrap();
    assert!(r.passed(), "{:?}", r.counterexamples);
    assert_eq!(r.reverse_checked, 300);
}

fn poly2() -> impl Strategy<Value = MPoly> {
    proptest::collection::vec((0u32..4, 0u32..4, 0u64..3), 0..6)
        .prop_map(|ts| MPoly::from_terms(f3(), 2, ts.into_iter().map(|(a, b, c)| (vec![a, b], c))))
}

fn poly4() -> impl Strategy<Value = MPoly> {
    proptest::collection::vec((proptest::collection::vec(0u32..3, 4), 0u64..5), 0..5)
        .prop_map(|ts| MPoly::from_terms(Modulus::new(5, 1).unwrap(), 4, ts))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn d_squared_and_leibniz(f in poly2(), g in poly2(), h in poly2()) {
        let df = d_function(&f);
        prop_assert!(df.de_rham_d().unwrap().is_zero());
        // d(g·df) = dg∧df
        let w = df.mul_function(&g);
        prop_assert_eq!(w.de_rham_d().unwrap(), d_function(&g).wedge(&df).unwrap());
        // d(gh) = g dh + h dg
        prop_assert_eq!(d_function(&g.mul(&h)), d_function(&h).mul_function(&g).add(&d_function(&g).mul_function(&h)).unwrap());
    }

    #[test]
    fn cartier_is_additive_with_closed_image(f in poly2(), g in poly2()) {
        let a = DiffForm::monomial_form(f, &[0]).add(&DiffForm::monomial_form(g.clone(), &[1])).unwrap();
        let b = DiffForm::monomial_form(g, &[0]);
        let ca = cartier_inverse(&a).unwrap();
        prop_assert!(ca.is_closed());
        prop_assert_eq!(cartier_inverse(&a.add(&b).unwrap()).unwrap(), ca.add(&cartier_inverse(&b).unwrap()).unwrap());
        prop_assert_eq!(cartier_inverse(&a.scale(2)).unwrap(), ca.scale(2));
    }

    #[test]
    fn bracket_is_a_poisson_structure(f in poly4(), g in poly4(), h in poly4()) {
        let br = |a: &MPoly, b: &MPoly| poisson_bracket(a, b).unwrap();
        prop_assert_eq!(br(&f, &g), br(&g, &f).neg());
        let jac = br(&f, &br(&g, &h)).add(&br(&g, &br(&h, &f))).add(&br(&h, &br(&f, &g)));
        prop_assert!(jac.is_zero());
        prop_assert_eq!(br(&f, &g.mul(&h)), br(&f, &g).mul(&h).add(&g.mul(&br(&f, &h))));
    }
}
