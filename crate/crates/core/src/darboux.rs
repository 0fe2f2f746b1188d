//! The nonlocal Darboux transformation of the free operator `Δ`.
//!
//! Given a solution `B` of the nonlinear system for `B`, the new potential is
//! `ũ = ΔB/B` and a seed `(Y, Q)` with `Y_x = Q_y`, `Y_y = −Q_x` maps to
//!
//! `Ỹ = R1·Y − Y_y + R2·Q`,
//!
//! which solves `ΔỸ − ũỸ = 0`. The rational pipeline never forms `ln B`; all
//! dependence on `h = −ln B` goes through ratios such as `B_x/B`.

use crate::harmonic::HarmonicPair;
use crate::poly::Var;
use crate::{Error, RatFn, Result};

/// Derivatives of `B` up to second order, shared by the operations below.
#[derive(Clone, Debug)]
pub struct Derivatives {
    pub b: RatFn,
    pub bx: RatFn,
    pub by: RatFn,
    pub bxx: RatFn,
    pub byy: RatFn,
    pub bxy: RatFn,
}

impl Derivatives {
    pub fn new(b: &RatFn) -> Result<Self> {
        let bx = b.diff(Var::X)?;
        let by = b.diff(Var::Y)?;
        Ok(Self {
            b: b.clone(),
            bxx: bx.diff(Var::X)?,
            bxy: bx.diff(Var::Y)?,
            byy: by.diff(Var::Y)?,
            bx,
            by,
        })
    }

    /// `B_x² + B_y²`.
    pub fn grad_sq(&self) -> Result<RatFn> {
        self.bx.mul(&self.bx)?.add(&self.by.mul(&self.by)?)
    }

    pub fn is_constant(&self) -> bool {
        self.bx.is_zero() && self.by.is_zero()
    }
}

/// `ũ = (B_xx + B_yy)/B`, unreduced.
pub fn potential_from_b(b: &RatFn) -> Result<RatFn> {
    if b.is_zero() {
        return Err(Error::ZeroInput);
    }
    b.laplacian()?.div(b)
}

/// Coefficients of the transform at `h = 0`:
///
/// `R1 = (B_y(B_xx − B_yy) − 2B_x B_xy) / (2(B_x² + B_y²))`,
/// `R2 = (B_x(B_xx − B_yy) + 2B_y B_xy) / (2(B_x² + B_y²))`.
pub fn r_coeffs(b: &RatFn) -> Result<(RatFn, RatFn)> {
    r_coeffs_from(&Derivatives::new(b)?)
}

pub fn r_coeffs_from(d: &Derivatives) -> Result<(RatFn, RatFn)> {
    if d.is_constant() {
        return Err(Error::ConstantB);
    }
    let denom = d.grad_sq()?.scale(&crate::rat(2, 1));
    let diff = d.bxx.sub(&d.byy)?;
    let r1 = d.by.mul(&diff)?.sub(&d.bx.mul(&d.bxy)?.scale(&crate::rat(2, 1)))?;
    let r2 = d.bx.mul(&diff)?.add(&d.by.mul(&d.bxy)?.scale(&crate::rat(2, 1)))?;
    Ok((r1.div(&denom)?, r2.div(&denom)?))
}

/// The Darboux operator at `h = 0` applied to `F = (F1, F2)`:
///
/// ```text
/// | B·R1 − B∂_y      B·R2               | |F1|
/// | B_x − B·R2       B_y + B·R1 − B∂_y  | |F2|
/// ```
pub fn apply_ld(b: &RatFn, f: (&RatFn, &RatFn)) -> Result<(RatFn, RatFn)> {
    let d = Derivatives::new(b)?;
    let (r1, r2) = r_coeffs_from(&d)?;
    apply_ld_with(&d, &r1, &r2, f)
}

fn apply_ld_with(
    d: &Derivatives,
    r1: &RatFn,
    r2: &RatFn,
    (f1, f2): (&RatFn, &RatFn),
) -> Result<(RatFn, RatFn)> {
    let b = &d.b;
    let br1 = b.mul(r1)?;
    let br2 = b.mul(r2)?;
    let first = br1
        .mul(f1)?
        .sub(&b.mul(&f1.diff(Var::Y)?)?)?
        .add(&br2.mul(f2)?)?;
    let second = d
        .bx
        .sub(&br2)?
        .mul(f1)?
        .add(&d.by.add(&br1)?.mul(f2)?)?
        .sub(&b.mul(&f2.diff(Var::Y)?)?)?;
    Ok((first, second))
}

/// Result of transforming one seed.
#[derive(Clone, Debug)]
pub struct TransformOutput {
    /// New Schrödinger solution `Ỹ = R1·Y − Y_y + R2·Q`.
    pub y_tilde: RatFn,
    /// New Fokker–Planck solution `W̃ = B·Ỹ`, first component of `L_D(Y, Q)`.
    pub w_tilde: RatFn,
    /// Second component of `L_D(Y, Q)`, the new nonlocal variable.
    pub q_tilde: RatFn,
}

/// Transforms a seed of the free equation into a solution for `ũ = ΔB/B`.
pub fn transform_solution(b: &RatFn, seed: &HarmonicPair) -> Result<TransformOutput> {
    if !seed.is_valid() {
        return Err(Error::InvalidSeed);
    }
    let d = Derivatives::new(b)?;
    let (r1, r2) = r_coeffs_from(&d)?;
    let y = RatFn::from_poly(seed.y.clone());
    let q = RatFn::from_poly(seed.q.clone());
    let y_tilde = r1
        .mul(&y)?
        .sub(&y.diff(Var::Y)?)?
        .add(&r2.mul(&q)?)?;
    let (w_tilde, q_tilde) = apply_ld_with(&d, &r1, &r2, (&y, &q))?;
    Ok(TransformOutput {
        y_tilde,
        w_tilde,
        q_tilde,
    })
}

/// Value and partial derivatives up to order two at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dyy: f64,
    pub dxy: f64,
}

/// `u = −h_xx − h_yy + h_x² + h_y²` evaluated pointwise.
pub fn u_from_h<H>(h: H) -> impl Fn(f64, f64) -> f64
where
    H: Fn(f64, f64) -> Jet2,
{
    move |x, y| {
        let j = h(x, y);
        -j.dxx - j.dyy + j.dx * j.dx + j.dy * j.dy
    }
}

/// `h = −ln B` as a jet, from the jet of `B`.
pub fn neg_log_jet(b: Jet2) -> Jet2 {
    let hx = -b.dx / b.v;
    let hy = -b.dy / b.v;
    Jet2 {
        v: -libm::log(libm::fabs(b.v)),
        dx: hx,
        dy: hy,
        dxx: -b.dxx / b.v + hx * hx,
        dyy: -b.dyy / b.v + hy * hy,
        dxy: -b.dxy / b.v + hx * hy,
    }
}

/// Double-precision jet of a rational `B`, built from its exact derivatives.
pub fn rational_jet(b: &RatFn) -> Result<impl Fn(f64, f64) -> Jet2> {
    let d = Derivatives::new(b)?;
    let c = [&d.b, &d.bx, &d.by, &d.bxx, &d.byy, &d.bxy].map(|f| f.compile());
    Ok(move |x, y| Jet2 {
        v: c[0].eval(x, y),
        dx: c[1].eval(x, y),
        dy: c[2].eval(x, y),
        dxx: c[3].eval(x, y),
        dyy: c[4].eval(x, y),
        dxy: c[5].eval(x, y),
    })
}
