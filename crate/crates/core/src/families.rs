//! Concrete solvable families.
//!
//! Rational families have the shape `B = N/(M + C)` with `M = Π |z − zᵢ|²`
//! and a harmonic numerator `N`. Every builder derives `N` from
//! [`laplace_constrained_numerator`] and, where a closed formula for `N` is
//! known (`B0`, `B1`, `B3`), checks the two agree term by term.
//!
//! The closed-form potentials in [`closed_potential`] are transcribed
//! formulas, deliberately not computed through `ΔB/B`; the cross-check lives
//! in the verification layer.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::darboux::Jet2;
use crate::harmonic::{dist_sq, laplace_constrained_numerator, PoleConfig};
use crate::poly::BiPoly;
use crate::{rat, Error, Rational, RatFn, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    B0,
    B1,
    B2,
    B3,
    Tanh,
    Custom,
}

impl FamilyTag {
    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::B0 => "b0",
            FamilyTag::B1 => "b1",
            FamilyTag::B2 => "b2",
            FamilyTag::B3 => "b3",
            FamilyTag::Tanh => "tanh",
            FamilyTag::Custom => "custom",
        }
    }
}

/// How the weights of `B2` are chosen inside the solved two-parameter family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightsChoice {
    /// Coefficients of the canonical basis vectors.
    Basis(Vec<Rational>),
    /// A full weight vector `(p0, q0, p1, q1, p2, q2)`, checked for membership.
    Weights(Vec<Rational>),
}

/// Parameters of every family, mirroring the builder arguments.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyParams {
    B0 {
        p0: Rational,
        q0: Rational,
        x0: Rational,
        y0: Rational,
        c: Rational,
    },
    B1 {
        p0: Rational,
        q0: Rational,
        x0: Rational,
        y0: Rational,
        x1: Rational,
        y1: Rational,
        c: Rational,
    },
    B2 {
        weights: WeightsChoice,
        x1: Rational,
        y1: Rational,
        x2: Rational,
        y2: Rational,
        c: Rational,
    },
    B3 {
        p1: Rational,
        q1: Rational,
        x1: Rational,
        y1: Rational,
        c: Rational,
    },
    Tanh(TanhSolution),
}

impl FamilyParams {
    pub fn tag(&self) -> FamilyTag {
        match self {
            FamilyParams::B0 { .. } => FamilyTag::B0,
            FamilyParams::B1 { .. } => FamilyTag::B1,
            FamilyParams::B2 { .. } => FamilyTag::B2,
            FamilyParams::B3 { .. } => FamilyTag::B3,
            FamilyParams::Tanh(_) => FamilyTag::Tanh,
        }
    }

    pub fn c(&self) -> Option<&Rational> {
        match self {
            FamilyParams::B0 { c, .. }
            | FamilyParams::B1 { c, .. }
            | FamilyParams::B2 { c, .. }
            | FamilyParams::B3 { c, .. } => Some(c),
            FamilyParams::Tanh(_) => None,
        }
    }
}

/// `B = N/(M + C)` together with its provenance.
#[derive(Clone, Debug)]
pub struct RationalSolution {
    pub b: RatFn,
    pub numerator: BiPoly,
    /// `M`, the product of squared pole distances.
    pub m: BiPoly,
    /// Poles with repetition (a repeated pole is a higher-order pole) and the
    /// solved weight vector, paired up in unknown order.
    pub config: PoleConfig,
    pub family: FamilyTag,
    pub preset: Option<&'static str>,
}

fn check_c(c: &Rational) -> Result<()> {
    if c.is_positive() {
        Ok(())
    } else {
        Err(Error::NonpositiveC)
    }
}

fn check_weight(p: &Rational, q: &Rational) -> Result<()> {
    if p.is_zero() && q.is_zero() {
        Err(Error::ZeroWeight)
    } else {
        Ok(())
    }
}

fn pairs(w: &[Rational]) -> Vec<(Rational, Rational)> {
    w.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect()
}

fn assemble(
    numerator: BiPoly,
    m: BiPoly,
    poles: Vec<(Rational, Rational)>,
    weights: &[Rational],
    c: &Rational,
    family: FamilyTag,
) -> Result<RationalSolution> {
    let den = &m + &BiPoly::constant(c.clone());
    Ok(RationalSolution {
        b: RatFn::new(numerator.clone(), den)?,
        numerator,
        m,
        config: PoleConfig {
            poles,
            weights: pairs(weights),
            c: c.clone(),
        },
        family,
        preset: None,
    })
}

/// `B0 = (p0(x − x0) + q0(y − y0)) / ((x − x0)² + (y − y0)² + C)`.
pub fn build_b0(p0: &Rational, q0: &Rational, x0: &Rational, y0: &Rational, c: &Rational) -> Result<RationalSolution> {
    check_weight(p0, q0)?;
    check_c(c)?;
    let poles = vec![(x0.clone(), y0.clone())];
    let space = laplace_constrained_numerator(&poles)?;
    let w = vec![p0.clone(), q0.clone()];
    space.coordinates(&w).ok_or(Error::WeightOutsideFamily)?;
    let n = space.numerator(&w);
    assert_eq!(n, BiPoly::linear(p0, q0, &-(p0 * x0 + q0 * y0)));
    assemble(n, space.denominator()?, poles, &w, c, FamilyTag::B0)
}

/// Closed formula for `N1`, the numerator of `B1`.
pub fn n1_formula(p0: &Rational, q0: &Rational, x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational) -> BiPoly {
    let two = rat(2, 1);
    let dx = x0 - x1;
    let dy = y0 - y1;
    let s = x0 * x0 - x1 * x1 + y0 * y0 - y1 * y1;
    let cross = x0 * y1 - y0 * x1;
    let r0 = x0 * x0 + y0 * y0;
    let r1 = x1 * x1 + y1 * y1;
    let a = p0 * &dx - q0 * &dy;
    let b = &two * (p0 * &dy + q0 * &dx);
    let cx = -(p0 * &s + &two * q0 * &cross);
    let cy = &two * p0 * &cross - q0 * &s;
    let c0 = -(p0 * (x0 * &r1 - x1 * &r0)) - q0 * (y0 * &r1 - y1 * &r0);
    BiPoly::from_terms([
        ((2, 0), a.clone()),
        ((0, 2), -a),
        ((1, 1), b),
        ((1, 0), cx),
        ((0, 1), cy),
        ((0, 0), c0),
    ])
}

/// `B1 = N1/(M1 + C)` with poles `(x0, y0)`, `(x1, y1)`; the family member is
/// selected by the weight `(p0, q0)` on the first pole.
#[allow(clippy::too_many_arguments)]
pub fn build_b1(
    p0: &Rational,
    q0: &Rational,
    x0: &Rational,
    y0: &Rational,
    x1: &Rational,
    y1: &Rational,
    c: &Rational,
) -> Result<RationalSolution> {
    let poles = vec![(x0.clone(), y0.clone()), (x1.clone(), y1.clone())];
    crate::harmonic::ensure_distinct(&poles)?;
    check_weight(p0, q0)?;
    check_c(c)?;
    let space = laplace_constrained_numerator(&poles)?;
    let w = space
        .member_with(&[0, 1], &[p0.clone(), q0.clone()])
        .ok_or(Error::Degenerate("weights on the first pole do not fix a unique member"))?;
    let n = space.numerator(&w);
    assert_eq!(n, n1_formula(p0, q0, x0, y0, x1, y1));
    assemble(n, space.denominator()?, poles, &w, c, FamilyTag::B1)
}

/// `B2 = N2/(M2 + C)` with poles `(0,0)`, `(x1, y1)`, `(x2, y2)` and `N2`
/// chosen inside the solved family.
pub fn build_b2(
    choice: &WeightsChoice,
    x1: &Rational,
    y1: &Rational,
    x2: &Rational,
    y2: &Rational,
    c: &Rational,
) -> Result<RationalSolution> {
    let poles = vec![
        (Rational::zero(), Rational::zero()),
        (x1.clone(), y1.clone()),
        (x2.clone(), y2.clone()),
    ];
    crate::harmonic::ensure_distinct(&poles)?;
    check_c(c)?;
    let space = laplace_constrained_numerator(&poles)?;
    let w = match choice {
        WeightsChoice::Basis(coeffs) => {
            if coeffs.len() != space.dim() {
                return Err(Error::WeightOutsideFamily);
            }
            space.combination(coeffs)
        }
        WeightsChoice::Weights(w) => {
            if w.len() != space.unknowns() || space.coordinates(w).is_none() {
                return Err(Error::WeightOutsideFamily);
            }
            w.clone()
        }
    };
    if w.iter().all(Zero::is_zero) {
        return Err(Error::ZeroWeight);
    }
    let n = space.numerator(&w);
    assemble(n, space.denominator()?, poles, &w, c, FamilyTag::B2)
}

/// `m1..m4` of the `B3` numerator.
pub fn b3_constants(x1: &Rational, y1: &Rational) -> [Rational; 4] {
    let (x2, y2) = (x1 * x1, y1 * y1);
    [
        x1 * (&x2 - rat(3, 1) * &y2),
        y1 * (&y2 - rat(3, 1) * &x2),
        rat(2, 1) * x1 * y1 * (&x2 + &y2),
        &x2 * &x2 - &y2 * &y2,
    ]
}

/// Closed formula for `H`, the numerator of `B3`.
pub fn h_formula(p1: &Rational, q1: &Rational, x1: &Rational, y1: &Rational) -> BiPoly {
    let [m1, m2, m3, m4] = b3_constants(x1, y1);
    let re4: BiPoly = "x^4 - 6*x^2*y^2 + y^4".parse().expect("literal");
    let xy: BiPoly = "x^3*y - x*y^3".parse().expect("literal");
    let re3: BiPoly = "x^3 - 3*x*y^2".parse().expect("literal");
    let im3: BiPoly = "y^3 - 3*x^2*y".parse().expect("literal");
    &(&(&re4.scale(&(&m1 * p1 + &m2 * q1)) + &xy.scale(&(rat(4, 1) * (&m1 * q1 - &m2 * p1))))
        + &re3.scale(&(&m3 * q1 - &m4 * p1)))
        + &im3.scale(&(&m4 * q1 + &m3 * p1))
}

/// `B3 = H / ((x² + y²)³((x − x1)² + (y − y1)²) + C)`: a third-order pole at
/// the origin and a simple pole at `(x1, y1)` weighted by `(p1, q1)`.
pub fn build_b3(p1: &Rational, q1: &Rational, x1: &Rational, y1: &Rational, c: &Rational) -> Result<RationalSolution> {
    if x1.is_zero() && y1.is_zero() {
        return Err(Error::Degenerate("(x1, y1) must differ from the origin"));
    }
    check_weight(p1, q1)?;
    check_c(c)?;
    let o = (Rational::zero(), Rational::zero());
    let poles = vec![o.clone(), (x1.clone(), y1.clone()), o.clone(), o];
    let space = laplace_constrained_numerator(&poles)?;
    // Unknowns: origin orders 1..3 first, then the simple pole.
    let w = space
        .member_with(&[6, 7], &[p1.clone(), q1.clone()])
        .ok_or(Error::Degenerate("weights on (x1, y1) do not fix a unique member"))?;
    let n = space.numerator(&w);
    assert_eq!(n, h_formula(p1, q1, x1, y1));
    assemble(n, space.denominator()?, poles, &w, c, FamilyTag::B3)
}

/// Builds any rational family from its parameters.
pub fn build(params: &FamilyParams) -> Result<RationalSolution> {
    match params {
        FamilyParams::B0 { p0, q0, x0, y0, c } => build_b0(p0, q0, x0, y0, c),
        FamilyParams::B1 { p0, q0, x0, y0, x1, y1, c } => build_b1(p0, q0, x0, y0, x1, y1, c),
        FamilyParams::B2 { weights, x1, y1, x2, y2, c } => build_b2(weights, x1, y1, x2, y2, c),
        FamilyParams::B3 { p1, q1, x1, y1, c } => build_b3(p1, q1, x1, y1, c),
        FamilyParams::Tanh(_) => Err(Error::Degenerate("tanh family is not rational")),
    }
}

/// `B_s = tanh((xy − C2)/C1)`, evaluated in double precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TanhSolution {
    pub c1: f64,
    pub c2: f64,
}

impl TanhSolution {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if c1 == 0.0 || !c1.is_finite() || !c2.is_finite() {
            return Err(Error::Degenerate("C1 must be finite and nonzero"));
        }
        Ok(Self { c1, c2 })
    }

    fn arg(&self, x: f64, y: f64) -> f64 {
        (x * y - self.c2) / self.c1
    }

    pub fn b(&self, x: f64, y: f64) -> f64 {
        libm::tanh(self.arg(x, y))
    }

    /// `u = −2 C1⁻² (x² + y²) cosh⁻²((xy − C2)/C1)`.
    pub fn u(&self, x: f64, y: f64) -> f64 {
        let ch = libm::cosh(self.arg(x, y));
        -2.0 / (self.c1 * self.c1) * (x * x + y * y) / (ch * ch)
    }

    /// Analytic jet of `B_s`.
    pub fn jet(&self, x: f64, y: f64) -> Jet2 {
        let t = libm::tanh(self.arg(x, y));
        let ch = libm::cosh(self.arg(x, y));
        let sech2 = 1.0 / (ch * ch);
        let (sx, sy, sxy) = (y / self.c1, x / self.c1, 1.0 / self.c1);
        Jet2 {
            v: t,
            dx: sech2 * sx,
            dy: sech2 * sy,
            dxx: -2.0 * t * sech2 * sx * sx,
            dyy: -2.0 * t * sech2 * sy * sy,
            dxy: -2.0 * t * sech2 * sx * sy + sech2 * sxy,
        }
    }

    pub fn formula(&self) -> alloc::string::String {
        alloc::format!(
            "B = tanh((x*y - {c2})/{c1}); u = -2/{c1}^2*(x^2 + y^2)/cosh((x*y - {c2})/{c1})^2",
            c1 = self.c1,
            c2 = self.c2
        )
    }
}

/// Closed-form potential of a family.
#[derive(Clone, Debug)]
pub enum ClosedPotential {
    Rational {
        u: RatFn,
        family: FamilyTag,
        /// Derived constants (`k1..k6` for `B2`, `m1..m4` for `B3`).
        constants: Vec<(&'static str, Rational)>,
    },
    Tanh(TanhSolution),
}

impl ClosedPotential {
    pub fn rational(&self) -> Option<&RatFn> {
        match self {
            ClosedPotential::Rational { u, .. } => Some(u),
            ClosedPotential::Tanh(_) => None,
        }
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        match self {
            ClosedPotential::Rational { u, .. } => u.eval_f64(x, y),
            ClosedPotential::Tanh(t) => t.u(x, y),
        }
    }
}

fn shifted_dist(a: &Rational, b: &Rational) -> BiPoly {
    dist_sq(a, b)
}

fn over_square(num: BiPoly, m: &BiPoly, c: &Rational) -> Result<RatFn> {
    RatFn::from_factors(num, [(m + &BiPoly::constant(c.clone()), 2)])
}

/// `k1..k6` of the `B2` potential.
pub fn b2_constants(x1: &Rational, y1: &Rational, x2: &Rational, y2: &Rational) -> [Rational; 6] {
    [x1 + x2, y1 + y2, x1 * x2, y1 * y2, x1 * y2, y1 * x2]
}

/// `G` of the `B2` potential.
pub fn g_formula(x1: &Rational, y1: &Rational, x2: &Rational, y2: &Rational) -> BiPoly {
    let [k1, k2, k3, k4, k5, k6] = b2_constants(x1, y1, x2, y2);
    let two = rat(2, 1);
    let first = &BiPoly::linear(&rat(3, 1), &Rational::zero(), &-(&two * &k1)).pow(2).expect("small")
        + &BiPoly::linear(&Rational::zero(), &rat(3, 1), &-(&two * &k2)).pow(2).expect("small");
    let first = first.mul(&"x^2 + y^2".parse().expect("literal")).expect("small");
    let rest = BiPoly::from_terms([
        ((2, 0), rat(6, 1) * (&k3 - &k4)),
        ((0, 2), rat(-6, 1) * (&k3 - &k4)),
        ((1, 1), rat(12, 1) * (&k5 + &k6)),
        ((1, 0), rat(-4, 1) * (&k1 * &k3 + &k5 * y2 + &k6 * y1)),
        ((0, 1), rat(-4, 1) * (&k2 * &k4 + &k5 * x1 + &k6 * x2)),
        ((0, 0), (x1 * x1 + y1 * y1) * (x2 * x2 + y2 * y2)),
    ]);
    &first + &rest
}

/// The transcribed closed-form potential for a family.
pub fn closed_potential(params: &FamilyParams) -> Result<ClosedPotential> {
    let (u, family, constants) = match params {
        FamilyParams::B0 { p0, q0, x0, y0, c } => {
            check_weight(p0, q0)?;
            check_c(c)?;
            let num = BiPoly::constant(rat(-8, 1) * c);
            (over_square(num, &shifted_dist(x0, y0), c)?, FamilyTag::B0, Vec::new())
        }
        FamilyParams::B1 { x0, y0, x1, y1, c, .. } => {
            crate::harmonic::ensure_distinct(&[(x0.clone(), y0.clone()), (x1.clone(), y1.clone())])?;
            check_c(c)?;
            let half = rat(1, 2);
            let mid = shifted_dist(&(&half * (x0 + x1)), &(&half * (y0 + y1)));
            let m = shifted_dist(x0, y0).mul(&shifted_dist(x1, y1))?;
            (over_square(mid.scale(&(rat(-32, 1) * c)), &m, c)?, FamilyTag::B1, Vec::new())
        }
        FamilyParams::B2 { x1, y1, x2, y2, c, .. } => {
            let o = (Rational::zero(), Rational::zero());
            crate::harmonic::ensure_distinct(&[o, (x1.clone(), y1.clone()), (x2.clone(), y2.clone())])?;
            check_c(c)?;
            let m = "x^2 + y^2"
                .parse::<BiPoly>()?
                .mul(&shifted_dist(x1, y1))?
                .mul(&shifted_dist(x2, y2))?;
            let g = g_formula(x1, y1, x2, y2);
            let names = ["k1", "k2", "k3", "k4", "k5", "k6"];
            let constants = names.into_iter().zip(b2_constants(x1, y1, x2, y2)).collect();
            (over_square(g.scale(&(rat(-8, 1) * c)), &m, c)?, FamilyTag::B2, constants)
        }
        FamilyParams::B3 { x1, y1, c, .. } => {
            if x1.is_zero() && y1.is_zero() {
                return Err(Error::Degenerate("(x1, y1) must differ from the origin"));
            }
            check_c(c)?;
            let r2: BiPoly = "x^2 + y^2".parse().expect("literal");
            let m = r2.pow(3)?.mul(&shifted_dist(x1, y1))?;
            let q = rat(3, 4);
            let num = r2
                .pow(2)?
                .mul(&shifted_dist(&(&q * x1), &(&q * y1)))?
                .scale(&(rat(-128, 1) * c));
            let names = ["m1", "m2", "m3", "m4"];
            let constants = names.into_iter().zip(b3_constants(x1, y1)).collect();
            (over_square(num, &m, c)?, FamilyTag::B3, constants)
        }
        FamilyParams::Tanh(t) => return Ok(ClosedPotential::Tanh(*t)),
    };
    Ok(ClosedPotential::Rational { u, family, constants })
}

/// `B2` potential evaluated directly in double precision, for parameters that
/// are not rational.
pub fn u2_f64(x1: f64, y1: f64, x2: f64, y2: f64, c: f64) -> impl Fn(f64, f64) -> f64 {
    let (k1, k2, k3, k4, k5, k6) = (x1 + x2, y1 + y2, x1 * x2, y1 * y2, x1 * y2, y1 * x2);
    move |x, y| {
        let r2 = x * x + y * y;
        let a = 3.0 * x - 2.0 * k1;
        let b = 3.0 * y - 2.0 * k2;
        let g = (a * a + b * b) * r2 + 6.0 * (k3 - k4) * (x * x - y * y) + 12.0 * (k5 + k6) * x * y
            - 4.0 * (k1 * k3 + k5 * y2 + k6 * y1) * x
            - 4.0 * (k2 * k4 + k5 * x1 + k6 * x2) * y
            + (x1 * x1 + y1 * y1) * (x2 * x2 + y2 * y2);
        let d1 = (x - x1) * (x - x1) + (y - y1) * (y - y1);
        let d2 = (x - x2) * (x - x2) + (y - y2) * (y - y2);
        let den = r2 * d1 * d2 + c;
        -8.0 * c * g / (den * den)
    }
}

/// Pole coordinates `(x1, y1, x2, y2)` of the second comparison preset, in
/// double precision: `s = √(788 + √1252969)`, `x1,2 = −1/80 ∓ s/80`,
/// `y1,2 = (∓159 + s)/(16 s)`.
pub fn tsarev2_poles_f64() -> [f64; 4] {
    let s = libm::sqrt(788.0 + libm::sqrt(1_252_969.0));
    [
        -1.0 / 80.0 - s / 80.0,
        (-159.0 + s) / (16.0 * s),
        -1.0 / 80.0 + s / 80.0,
        (159.0 + s) / (16.0 * s),
    ]
}

pub const TSAREV2_C: i64 = 50;

/// Continued-fraction convergent of `v` within `tol`.
pub fn rational_approx(v: f64, tol: f64) -> Rational {
    let target = Rational::from_float(v).expect("finite value");
    let tol = Rational::from_float(tol).expect("finite tolerance");
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = target.clone();
    loop {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        let approx = Rational::new(h2.clone(), k2.clone());
        if (&approx - &target).abs() < tol || rest == Rational::from_integer(a.clone()) {
            return approx;
        }
        rest = (rest - Rational::from_integer(a)).recip();
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
}

/// Named parameter presets.
pub fn preset(name: &str) -> Option<FamilyParams> {
    match name {
        "tsarev-1" => Some(FamilyParams::B1 {
            p0: Rational::one(),
            q0: Rational::zero(),
            x0: Rational::zero(),
            y0: Rational::zero(),
            x1: rat(-8, 17),
            y1: rat(-2, 17),
            c: rat(160, 17),
        }),
        "tsarev-2" => {
            let [x1, y1, x2, y2] = tsarev2_poles_f64().map(|v| rational_approx(v, 1e-13));
            Some(FamilyParams::B2 {
                weights: WeightsChoice::Basis(vec![Rational::one(), Rational::zero()]),
                x1,
                y1,
                x2,
                y2,
                c: rat(TSAREV2_C, 1),
            })
        }
        _ => None,
    }
}

/// Builds a preset and tags it with its name.
pub fn build_preset(name: &'static str) -> Option<Result<RationalSolution>> {
    let params = preset(name)?;
    Some(build(&params).map(|mut s| {
        s.preset = Some(name);
        s
    }))
}

/// Float view of a rational, for reports.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        rat(n, 1)
    }

    #[test]
    fn b0_examples() {
        let s = build_b0(&q(1), &q(0), &q(0), &q(0), &q(1)).unwrap();
        let want = RatFn::new("x".parse().unwrap(), "x^2 + y^2 + 1".parse().unwrap()).unwrap();
        assert!(s.b.sub(&want).unwrap().is_zero());
        let s = build_b0(&q(0), &q(1), &q(0), &q(0), &q(1)).unwrap();
        assert_eq!(s.numerator, "y".parse().unwrap());
        assert_eq!(build_b0(&q(1), &q(1), &q(2), &q(3), &q(0)).unwrap_err(), Error::NonpositiveC);
        assert_eq!(build_b0(&q(0), &q(0), &q(2), &q(3), &q(1)).unwrap_err(), Error::ZeroWeight);
    }

    #[test]
    fn b1_matches_formula_and_rejects_coincident_poles() {
        let s = build_b1(&rat(2, 3), &q(-1), &rat(1, 2), &q(2), &q(-3), &rat(5, 7), &q(3)).unwrap();
        assert!(s.numerator.laplacian().is_zero());
        assert_eq!(
            build_b1(&q(1), &q(0), &q(1), &q(1), &q(1), &q(1), &q(1)).unwrap_err(),
            Error::DuplicatePoles
        );
    }

    #[test]
    fn tsarev1_preset() {
        let s = build_preset("tsarev-1").unwrap().unwrap();
        assert_eq!(s.preset, Some("tsarev-1"));
        assert_eq!(s.config.c, rat(160, 17));
        let u = closed_potential(&preset("tsarev-1").unwrap()).unwrap();
        let v = u.rational().unwrap().eval(&q(0), &q(0)).unwrap();
        assert_eq!(v, rat(-1, 5));
    }

    #[test]
    fn b3_examples() {
        let s = build_b3(&q(2), &q(-1), &q(1), &rat(1, 2), &q(4)).unwrap();
        assert!(s.numerator.laplacian().is_zero());
        assert_eq!(s.m, "(x^2+y^2)^3*((x-1)^2+(y-1/2)^2)".parse().unwrap());
        assert!(build_b3(&q(1), &q(1), &q(0), &q(0), &q(1)).is_err());
        assert_eq!(b3_constants(&q(1), &q(1))[3], q(0));
    }

    #[test]
    fn b2_family() {
        let s = build_b2(&WeightsChoice::Basis(vec![q(1), q(2)]), &q(1), &q(2), &q(-1), &rat(1, 3), &q(5)).unwrap();
        assert!(s.numerator.laplacian().is_zero());
        let bad = WeightsChoice::Weights(vec![q(1), q(0), q(0), q(0), q(0), q(0)]);
        assert_eq!(
            build_b2(&bad, &q(1), &q(2), &q(-1), &rat(1, 3), &q(5)).unwrap_err(),
            Error::WeightOutsideFamily
        );
        assert_eq!(
            build_b2(&WeightsChoice::Basis(vec![q(1), q(0)]), &q(1), &q(2), &q(1), &q(2), &q(5)).unwrap_err(),
            Error::DuplicatePoles
        );
    }

    #[test]
    fn tanh_examples() {
        let t = TanhSolution::new(1.0, 0.0).unwrap();
        assert_eq!(t.u(0.0, 0.0), 0.0);
        assert!((t.b(1.0, 1.0) - 0.76159415595).abs() < 1e-11);
        assert!((t.u(1.0, 1.0) - -1.679_897_4).abs() < 1e-7);
        assert!(TanhSolution::new(0.0, 1.0).is_err());
    }

    #[test]
    fn spot_values() {
        for c in [q(1), rat(3, 7), q(12)] {
            let p = FamilyParams::B0 { p0: q(1), q0: q(0), x0: q(0), y0: q(0), c: c.clone() };
            let u = closed_potential(&p).unwrap();
            assert_eq!(u.rational().unwrap().eval(&q(0), &q(0)).unwrap(), rat(-8, 1) / c);
        }
        let p = FamilyParams::B3 { p1: q(1), q1: q(0), x1: q(1), y1: q(2), c: q(3) };
        let u = closed_potential(&p).unwrap();
        assert!(u.rational().unwrap().eval(&q(0), &q(0)).unwrap().is_zero());
    }

    #[test]
    fn continued_fraction_approximation() {
        let v = tsarev2_poles_f64()[0];
        let r = rational_approx(v, 1e-12);
        assert!((to_f64(&r) - v).abs() < 1e-12);
        assert_eq!(rational_approx(0.75, 1e-12), rat(3, 4));
    }
}
