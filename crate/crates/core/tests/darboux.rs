use darboux_core::darboux::{
    neg_log_jet, potential_from_b, r_coeffs, rational_jet, transform_solution, u_from_h,
};
use darboux_core::families::{build, closed_potential, FamilyParams};
use darboux_core::harmonic::{conjugate, z_power, HarmonicPair};
use darboux_core::verify::{check_new_potential_system, check_schrodinger};
use darboux_core::{rat, BiPoly, RatFn, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=20).prop_map(|(n, d)| rat(n, d))
}

fn b0_params() -> impl Strategy<Value = FamilyParams> {
    (rational(), rational(), rational(), rational(), (1i64..=20, 1i64..=20))
        .prop_filter("zero weight", |(p, q, ..)| *p != rat(0, 1) || *q != rat(0, 1))
        .prop_map(|(p0, q0, x0, y0, (n, d))| FamilyParams::B0 { p0, q0, x0, y0, c: rat(n, d) })
}

fn b1_params() -> impl Strategy<Value = FamilyParams> {
    (b0_params(), rational(), rational()).prop_filter_map("coincident poles", |(p, x1, y1)| match p {
        FamilyParams::B0 { p0, q0, x0, y0, c } if (&x0, &y0) != (&x1, &y1) => {
            Some(FamilyParams::B1 { p0, q0, x0, y0, x1, y1, c })
        }
        _ => None,
    })
}

/// `(Y, Q)` with `Y` a combination of `Re zᵏ`, `Im zᵏ`, `k ≤ 4`.
fn seed() -> impl Strategy<Value = HarmonicPair> {
    prop::collection::vec((0u32..=4, any::<bool>(), rational()), 1..4).prop_map(|terms| {
        let y = terms.into_iter().fold(BiPoly::zero(), |acc, (k, re, c)| {
            let (r, i) = z_power(k);
            &acc + &(if re { r } else { i }).scale(&c)
        });
        let q = conjugate(&y).unwrap();
        HarmonicPair::new(y, q).unwrap()
    })
}

fn same(a: &RatFn, b: &RatFn) -> bool {
    a.sub(b).unwrap().is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coefficients_and_potential_are_scale_invariant(p in b1_params(), k in rational()) {
        prop_assume!(k != rat(0, 1));
        let b = build(&p).unwrap().b;
        let kb = b.scale(&k);
        let (r1, r2) = r_coeffs(&b).unwrap();
        let (s1, s2) = r_coeffs(&kb).unwrap();
        prop_assert!(same(&r1, &s1) && same(&r2, &s2));
        prop_assert!(same(&potential_from_b(&b).unwrap(), &potential_from_b(&kb).unwrap()));
    }

    #[test]
    fn transformed_seed_solves_new_equation(p in b0_params(), s in seed()) {
        let b = build(&p).unwrap().b;
        let u = potential_from_b(&b).unwrap();
        let out = transform_solution(&b, &s).unwrap();
        prop_assert!(check_schrodinger(&out.y_tilde, &u).unwrap().passed());
        prop_assert!(check_new_potential_system(&b, &out).unwrap().passed());
        prop_assert!(same(&out.w_tilde, &b.mul(&out.y_tilde).unwrap()));
    }

    #[test]
    fn transform_is_linear(p in b0_params(), s in seed(), t in seed(), a in rational(), c in rational()) {
        let b = build(&p).unwrap().b;
        let combo = HarmonicPair::new(&s.y.scale(&a) + &t.y.scale(&c), &s.q.scale(&a) + &t.q.scale(&c)).unwrap();
        let lhs = transform_solution(&b, &combo).unwrap().y_tilde;
        let ys = transform_solution(&b, &s).unwrap().y_tilde;
        let yt = transform_solution(&b, &t).unwrap().y_tilde;
        let rhs = ys.scale(&a).add(&yt.scale(&c)).unwrap();
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn u_from_h_matches_closed_b1_potential(p in b1_params(), x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let b = build(&p).unwrap().b;
        prop_assume!(b.eval_f64(x, y).abs() > 1e-3);
        let jet = rational_jet(&b).unwrap();
        let u = u_from_h(move |x, y| neg_log_jet(jet(x, y)));
        let want = closed_potential(&p).unwrap().eval_f64(x, y);
        prop_assert!((u(x, y) - want).abs() <= 1e-7 * (1.0 + want.abs()), "{} vs {}", u(x, y), want);
    }
}

#[test]
fn unit_seed_on_b0_gives_r1() {
    let p = FamilyParams::B0 { p0: rat(1, 1), q0: rat(0, 1), x0: rat(0, 1), y0: rat(0, 1), c: rat(1, 1) };
    let b = build(&p).unwrap().b;
    let (r1, _) = r_coeffs(&b).unwrap();
    let out = transform_solution(&b, &HarmonicPair::new(BiPoly::one(), BiPoly::zero()).unwrap()).unwrap();
    assert!(same(&out.y_tilde, &r1));
    assert!(check_schrodinger(&r1, &potential_from_b(&b).unwrap()).unwrap().passed());
}

