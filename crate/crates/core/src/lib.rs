//! Exact construction and certification of two-dimensional stationary
//! Schrödinger operators `ΔY − uY = 0` produced by a nonlocal Darboux
//! transformation of the free operator.
//!
//! The crate is `no_std` (it needs `alloc`). All identities are proven at the
//! rational-function level over arbitrary-precision rationals; floating point
//! only appears when sampling closures on grids.
//!
//! Layout:
//! - [`poly`] and [`ratfn`]: sparse bivariate polynomials and gcd-free rational
//!   functions.
//! - [`harmonic`]: harmonic seeds, conjugates and pole-sum numerators.
//! - [`families`]: the rational families `B0..B3`, the tanh family and their
//!   closed-form potentials.
//! - [`darboux`]: `ũ = ΔB/B`, the coefficients `R1, R2`, and the transform of
//!   seed solutions.
//! - [`verify`]: exact residual checks and finite-difference residuals.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod darboux;
mod error;
pub mod families;
pub mod harmonic;
pub mod linalg;
pub mod poly;
pub mod ratfn;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{exponent_cap, set_exponent_cap, BiPoly, Var, DEFAULT_EXPONENT_CAP};
pub use ratfn::RatFn;

/// Arbitrary-precision rational used for every exact coefficient.
pub type Rational = num_rational::BigRational;

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.25"` into an exact
/// rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    use alloc::string::ToString;
    use num_bigint::BigInt;
    use num_traits::{Num, Zero};

    let t = s.trim();
    let bad = || Error::Parse {
        pos: 0,
        msg: alloc::format!("invalid rational literal `{}`", t),
    };
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str_radix(n.trim(), 10).map_err(|_| bad())?;
        let d = BigInt::from_str_radix(d.trim(), 10).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = ip.trim_start_matches(['-', '+']).to_string() + fp;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut n = BigInt::from_str_radix(&digits, 10).map_err(|_| bad())?;
        if neg {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10u32), fp.len());
        return Ok(Rational::new(n, d));
    }
    BigInt::from_str_radix(t, 10)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// Small-integer rational shorthand.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
