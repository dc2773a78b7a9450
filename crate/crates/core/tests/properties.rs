// Randomised invariants of the form calculus and the contact action.

use conformalk::contact_forms::{lie_derivative, omega, FormElement, FormMonomial, Side};
use conformalk::grassmann::Mono;
use conformalk::kn_algebra::{contact_bracket, AnnihilationElement};
use conformalk::sparse::Lin;
use conformalk::GaussScalar;
use proptest::prelude::*;

const N: usize = 3;

fn monomial() -> impl Strategy<Value = FormMonomial> {
    (any::<bool>(), prop::collection::vec(0u8..3, N), 0u32..(1 << N), -3i32..4).prop_map(|(dt, dxi, xi, tpow)| FormMonomial { dt, dxi, xi: Mono(xi), tpow })
}

fn form() -> impl Strategy<Value = FormElement> {
    prop::collection::vec((monomial(), -3i64..4), 1..5).prop_map(|ts| {
        let mut t = Lin::new();
        for (m, c) in ts {
            t.add_term(m, GaussScalar::from_int(c));
        }
        // Laurent forms; callers pick a side
        FormElement { n: N, side: Side::Plus, terms: t }
    })
}

fn field() -> impl Strategy<Value = AnnihilationElement> {
    (0u32..3, 0u32..(1 << N), 1i64..3).prop_map(|(p, m, c)| AnnihilationElement::mono(N, p, Mono(m), GaussScalar::from_int(c)))
}

fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Plus), Just(Side::Minus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_vanishes(s in side(), a in form()) {
        prop_assert!(a.on_side(s).d().d().is_zero());
    }

    #[test]
    fn d_is_an_odd_derivation(a in form(), b in form()) {
        let (a, b) = (a.on_side(Side::Plus), b.on_side(Side::Plus));
        let lhs = a.wedge(&b).unwrap().d();
        let mut rhs = a.d().wedge(&b).unwrap();
        for (m, c) in &a.terms {
            let sign = GaussScalar::sign(m.parity() as i64);
            let am = FormElement { n: N, side: Side::Plus, terms: Lin::single(m.clone(), c * &sign) };
            rhs = rhs.add(&am.wedge(&b.d()).unwrap());
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_associative(a in form(), b in form(), c in form()) {
        let (a, b, c) = (a.on_side(Side::Plus), b.on_side(Side::Plus), c.on_side(Side::Plus));
        let l = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let r = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn lie_derivative_commutes_with_d(s in side(), x in field(), a in form()) {
        let a = a.on_side(s);
        let p = x.parity().unwrap();
        let l = lie_derivative(&x, &a.d()).unwrap();
        let r = lie_derivative(&x, &a).unwrap().d().scale(&GaussScalar::sign(p as i64));
        prop_assert_eq!(l, r);
    }

    #[test]
    fn lie_derivative_is_a_representation(s in side(), x in field(), y in field(), a in form()) {
        let a = a.on_side(s);
        let (p, q) = (x.parity().unwrap(), y.parity().unwrap());
        let lhs = lie_derivative(&contact_bracket(&x, &y), &a).unwrap();
        let xy = lie_derivative(&x, &lie_derivative(&y, &a).unwrap()).unwrap();
        let yx = lie_derivative(&y, &lie_derivative(&x, &a).unwrap()).unwrap();
        prop_assert_eq!(lhs, xy.add(&yx.scale(&-GaussScalar::sign((p * q) as i64))));
    }

    #[test]
    fn contact_form_is_rescaled(x in field()) {
        // L_X ω = f·ω for every contact vector field
        let om = omega(N);
        let l = lie_derivative(&x, &om).unwrap();
        let mut t = Lin::new();
        for (m, c) in &l.terms {
            if m.dt {
                let mut f = m.clone();
                f.dt = false;
                t.add_term(f, c.clone());
            }
        }
        let f = FormElement { n: N, side: Side::Plus, terms: t };
        prop_assert_eq!(l, f.wedge(&om).unwrap());
    }
}
