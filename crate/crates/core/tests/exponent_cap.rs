//! The exponent cap is process-wide, so these run in their own binary.

use darboux_core::{exponent_cap, set_exponent_cap, BiPoly, Error, RatFn, DEFAULT_EXPONENT_CAP};

#[test]
fn cap_is_enforced_and_restorable() {
    assert_eq!(exponent_cap(), DEFAULT_EXPONENT_CAP);
    let x: BiPoly = "x^3 + y".parse().unwrap();

    set_exponent_cap(5);
    assert_eq!(x.mul(&x).unwrap_err(), Error::ExponentCapExceeded { needed: 6, cap: 5 });
    assert!(matches!(x.pow(2), Err(Error::ExponentCapExceeded { .. })));
    // Denominator exponents count factors, not degrees: 1/(x³+y)² is fine.
    let f = RatFn::new(BiPoly::one(), x.clone()).unwrap();
    assert!(f.mul(&f).is_ok());
    assert!(x.mul(&BiPoly::y()).is_ok());

    set_exponent_cap(DEFAULT_EXPONENT_CAP);
    assert_eq!(x.pow(2).unwrap().to_string(), "x^6 + 2*x^3*y + y^2");
}
