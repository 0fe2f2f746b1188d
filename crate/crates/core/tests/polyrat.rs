use darboux_core::{rat, BiPoly, RatFn, Rational, Var};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = BiPoly> {
    prop::collection::vec(((0u32..4, 0u32..4), rational()), 0..6).prop_map(BiPoly::from_terms)
}

/// Nonconstant denominator; evaluations that land on one of its zeros are
/// handled by the tests.
fn den_poly() -> impl Strategy<Value = BiPoly> {
    (poly(), 1i64..5).prop_filter_map("constant", |(p, c)| {
        let q = &p + &BiPoly::constant(rat(c, 1));
        (!q.is_constant()).then_some(q)
    })
}

fn ratfn() -> impl Strategy<Value = RatFn> {
    (poly(), den_poly()).prop_map(|(n, d)| RatFn::new(n, d).unwrap())
}

fn zero(f: &RatFn) -> bool {
    f.is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&(&b + &c)).unwrap(), &a.mul(&b).unwrap() + &a.mul(&c).unwrap());
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(a.mul(&BiPoly::one()).unwrap(), a.clone());
    }

    #[test]
    fn mixed_partials_commute(p in poly()) {
        prop_assert_eq!(p.diff(Var::X).diff(Var::Y), p.diff(Var::Y).diff(Var::X));
    }

    #[test]
    fn leibniz_rule(a in poly(), b in poly()) {
        let lhs = a.mul(&b).unwrap().diff(Var::X);
        let rhs = &a.diff(Var::X).mul(&b).unwrap() + &a.mul(&b.diff(Var::X)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_is_a_ring_homomorphism(a in poly(), b in poly(), x in rational(), y in rational()) {
        prop_assert_eq!(a.mul(&b).unwrap().eval(&x, &y), a.eval(&x, &y) * b.eval(&x, &y));
        prop_assert_eq!((&a + &b).eval(&x, &y), a.eval(&x, &y) + b.eval(&x, &y));
    }

    #[test]
    fn integrate_inverts_diff(p in poly()) {
        prop_assert_eq!(p.integrate(Var::Y).diff(Var::Y), p);
    }

    #[test]
    fn canonical_text_parses_back(p in poly()) {
        prop_assert_eq!(p.to_string().parse::<BiPoly>().unwrap(), p);
    }

    #[test]
    fn ratfn_field_identities(f in ratfn(), g in ratfn()) {
        prop_assert!(zero(&f.sub(&f).unwrap()));
        prop_assert!(zero(&f.add(&g).unwrap().sub(&g.add(&f).unwrap()).unwrap()));
        if !g.is_zero() {
            let back = f.div(&g).unwrap().mul(&g).unwrap();
            prop_assert!(zero(&back.sub(&f).unwrap()));
        }
    }

    #[test]
    fn ratfn_quotient_rule(f in ratfn(), g in ratfn()) {
        // (fg)' = f'g + fg' on rational functions.
        let lhs = f.mul(&g).unwrap().diff(Var::Y).unwrap();
        let rhs = f.diff(Var::Y).unwrap().mul(&g).unwrap().add(&f.mul(&g.diff(Var::Y).unwrap()).unwrap()).unwrap();
        prop_assert!(zero(&lhs.sub(&rhs).unwrap()));
    }

    #[test]
    fn ratfn_eval_matches_parts(n in poly(), d in den_poly(), x in rational(), y in rational()) {
        let f = RatFn::new(n.clone(), d.clone()).unwrap();
        let dv = d.eval(&x, &y);
        match f.eval(&x, &y) {
            Ok(v) => prop_assert_eq!(v, n.eval(&x, &y) / dv),
            Err(e) => {
                prop_assert_eq!(e, darboux_core::Error::PoleEvaluation);
                prop_assert!(dv == rat(0, 1));
            }
        }
    }

    #[test]
    fn float_eval_agrees_with_exact(f in ratfn(), x in -3i64..=3, y in -3i64..=3) {
        if let Ok(v) = f.eval(&rat(x, 1), &rat(y, 1)) {
            let exact = darboux_core::families::to_f64(&v);
            let approx = f.compile().eval(x as f64, y as f64);
            prop_assert!((approx - exact).abs() <= 1e-9 * (1.0 + exact.abs()), "{} vs {}", approx, exact);
        }
    }
}

#[test]
fn laplacian_of_reciprocal_radius_squared() {
    // Δ(1/(x²+y²)) = 4/(x²+y²)², by hand.
    let r2: BiPoly = "x^2 + y^2".parse().unwrap();
    let f = RatFn::new(BiPoly::one(), r2.clone()).unwrap();
    let want = RatFn::from_factors(BiPoly::constant(rat(4, 1)), [(r2, 2)]).unwrap();
    assert!(f.laplacian().unwrap().sub(&want).unwrap().is_zero());
}
