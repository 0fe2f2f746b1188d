//! Certification of identities.
//!
//! Exact checks operate on rational functions and never evaluate at points:
//! a check passes iff every residual numerator expands to the zero
//! polynomial. Numeric checks apply central finite differences on a grid and
//! compare the maximum residual against a declared tolerance.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::darboux::{Derivatives, TransformOutput};
use crate::poly::Var;
use crate::{rat, Error, RatFn, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Detail {
    /// Term count and total degree of each expanded residual numerator.
    Exact {
        residual_terms: Vec<usize>,
        residual_degrees: Vec<Option<u32>>,
    },
    Numeric {
        max_residual: f64,
        tolerance: f64,
        points: usize,
        /// Grid and stencil order, for finite-difference residuals.
        grid: Option<GridSpec>,
        order: Option<u32>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub check: String,
    pub mode: Mode,
    pub verdict: Verdict,
    pub detail: Detail,
    pub params: Vec<(String, String)>,
    pub seed: Option<u64>,
}

impl ResidualReport {
    fn exact(check: &str, residuals: &[RatFn]) -> Self {
        let residual_terms: Vec<usize> = residuals.iter().map(|r| r.num().num_terms()).collect();
        let verdict = if residual_terms.iter().all(|&t| t == 0) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            check: check.to_string(),
            mode: Mode::Exact,
            verdict,
            detail: Detail::Exact {
                residual_degrees: residuals.iter().map(|r| r.num().total_degree()).collect(),
                residual_terms,
            },
            params: Vec::new(),
            seed: None,
        }
    }

    /// A numeric check over `points` samples; passes iff `max_residual <= tolerance`
    /// (a NaN residual fails).
    pub fn numeric(check: &str, max_residual: f64, tolerance: f64, points: usize) -> Self {
        Self {
            check: check.to_string(),
            mode: Mode::Numeric,
            verdict: if max_residual <= tolerance {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            detail: Detail::Numeric {
                max_residual,
                tolerance,
                points,
                grid: None,
                order: None,
            },
            params: Vec::new(),
            seed: None,
        }
    }

    /// An exact check over caller-supplied residuals.
    pub fn from_residuals(check: &str, residuals: &[RatFn]) -> Self {
        Self::exact(check, residuals)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn named(mut self, check: impl Into<String>) -> Self {
        self.check = check.into();
        self
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.params.push((key.into(), value.into()));
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Total terms over all residual numerators (exact mode).
    pub fn residual_terms(&self) -> Option<usize> {
        match &self.detail {
            Detail::Exact { residual_terms, .. } => Some(residual_terms.iter().sum()),
            Detail::Numeric { .. } => None,
        }
    }

    pub fn max_residual(&self) -> Option<f64> {
        match &self.detail {
            Detail::Numeric { max_residual, .. } => Some(*max_residual),
            Detail::Exact { .. } => None,
        }
    }
}

/// The nonlinear system `B` must satisfy for the transform to exist:
///
/// ```text
/// −(2B B_y B_xy + B B_x (B_xx − B_yy) + B_x G) ΔB + B G ∂_x ΔB = 0
/// −(2B B_x B_xy − B B_y (B_xx − B_yy) + B_y G) ΔB + B G ∂_y ΔB = 0
/// ```
///
/// with `G = B_x² + B_y²`.
pub fn eq12_residuals(b: &RatFn) -> Result<[RatFn; 2]> {
    let d = Derivatives::new(b)?;
    if d.is_constant() {
        return Err(Error::ConstantB);
    }
    let two = rat(2, 1);
    let lap = d.bxx.add(&d.byy)?;
    let g = d.grad_sq()?;
    let bg = d.b.mul(&g)?;
    let diff = d.bxx.sub(&d.byy)?;
    let b_bxy2 = d.b.mul(&d.bxy)?.scale(&two);
    let b_diff = d.b.mul(&diff)?;

    let c1 = b_bxy2.mul(&d.by)?.add(&b_diff.mul(&d.bx)?)?.add(&d.bx.mul(&g)?)?;
    let e1 = bg.mul(&lap.diff(Var::X)?)?.sub(&c1.mul(&lap)?)?;

    let c2 = b_bxy2.mul(&d.bx)?.sub(&b_diff.mul(&d.by)?)?.add(&d.by.mul(&g)?)?;
    let e2 = bg.mul(&lap.diff(Var::Y)?)?.sub(&c2.mul(&lap)?)?;
    Ok([e1, e2])
}

pub fn check_eq12(b: &RatFn) -> Result<ResidualReport> {
    Ok(ResidualReport::exact("eq12", &eq12_residuals(b)?))
}

/// `ΔY − uY ≡ 0`.
pub fn check_schrodinger(y: &RatFn, u: &RatFn) -> Result<ResidualReport> {
    let r = y.laplacian()?.sub(&u.mul(y)?)?;
    Ok(ResidualReport::exact("schrodinger", &[r]))
}

/// `W_x − Q_y ≡ 0` and `W_y + Q_x ≡ 0`.
pub fn check_potential_system(w: &RatFn, q: &RatFn) -> Result<ResidualReport> {
    let r1 = w.diff(Var::X)?.sub(&q.diff(Var::Y)?)?;
    let r2 = w.diff(Var::Y)?.add(&q.diff(Var::X)?)?;
    Ok(ResidualReport::exact("potential_system", &[r1, r2]))
}

/// The potential pair for `h = −ln B`:
/// `W̃_x − 2(B_x/B)W̃ − Q̃_y ≡ 0` and `W̃_y − 2(B_y/B)W̃ + Q̃_x ≡ 0`.
pub fn check_new_potential_system(b: &RatFn, out: &TransformOutput) -> Result<ResidualReport> {
    let bx = b.diff(Var::X)?;
    let by = b.diff(Var::Y)?;
    if bx.is_zero() && by.is_zero() {
        return Err(Error::ConstantB);
    }
    let two = rat(2, 1);
    let w = &out.w_tilde;
    let q = &out.q_tilde;
    let hx = bx.div(b)?.scale(&two);
    let hy = by.div(b)?.scale(&two);
    let r1 = w.diff(Var::X)?.sub(&hx.mul(w)?)?.sub(&q.diff(Var::Y)?)?;
    let r2 = w.diff(Var::Y)?.sub(&hy.mul(w)?)?.add(&q.diff(Var::X)?)?;
    Ok(ResidualReport::exact("new_potential_system", &[r1, r2]))
}

/// `a − b ≡ 0`.
pub fn check_equal(a: &RatFn, b: &RatFn) -> Result<ResidualReport> {
    Ok(ResidualReport::exact("equal", &[a.sub(b)?]))
}

/// `Δf ≡ 0`.
pub fn check_laplace(f: &RatFn) -> Result<ResidualReport> {
    Ok(ResidualReport::exact("laplace", &[f.laplacian()?]))
}

/// Tensor grid for numeric residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    /// Points closer than this to any of `singular_points` are skipped.
    pub exclusion_radius: f64,
    pub singular_points: Vec<(f64, f64)>,
}

impl GridSpec {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidGrid("nx and ny must be at least 2"));
        }
        let ok = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ok(x_range) || !ok(y_range) {
            return Err(Error::InvalidGrid("ranges must be finite with lo < hi"));
        }
        Ok(Self {
            x_range,
            y_range,
            nx,
            ny,
            exclusion_radius: 1e-3,
            singular_points: Vec::new(),
        })
    }

    /// Square grid on `[lo, hi]²` with `n` points per axis.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::new((lo, hi), (lo, hi), n, n)
    }

    pub fn excluding(mut self, points: Vec<(f64, f64)>, radius: f64) -> Self {
        self.singular_points = points;
        self.exclusion_radius = radius;
        self
    }

    pub fn hx(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y_range.1 - self.y_range.0) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_range.0 + i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_range.0 + j as f64 * self.hy()
    }

    fn excluded(&self, x: f64, y: f64) -> bool {
        self.singular_points.iter().any(|&(a, b)| {
            let (dx, dy) = (x - a, y - b);
            libm::sqrt(dx * dx + dy * dy) < self.exclusion_radius
        })
    }
}

/// Central second-difference weights and half-width for the given order.
fn stencil(order: u32) -> Result<(&'static [f64], f64)> {
    match order {
        2 => Ok((&[1.0, -2.0, 1.0], 1.0)),
        4 => Ok((&[-1.0, 16.0, -30.0, 16.0, -1.0], 12.0)),
        o => Err(Error::StencilOrder(o)),
    }
}

/// Maximum of `|ΔY − uY|` over interior, non-excluded grid points, with the
/// Laplacian taken by 3-point (order 2) or 5-point (order 4) central
/// differences per axis at the grid spacing.
pub fn fd_residual(
    u: &dyn Fn(f64, f64) -> f64,
    y: &dyn Fn(f64, f64) -> f64,
    grid: &GridSpec,
    order: u32,
    tolerance: f64,
) -> Result<ResidualReport> {
    let (w, scale) = stencil(order)?;
    let half = w.len() / 2;
    if grid.nx <= 2 * half || grid.ny <= 2 * half {
        return Err(Error::InvalidGrid("grid too small for the stencil"));
    }
    let (nx, ny) = (grid.nx, grid.ny);
    let mut vals = vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            vals[j * nx + i] = y(grid.x(i), grid.y(j));
        }
    }
    let (hx2, hy2) = (grid.hx() * grid.hx() * scale, grid.hy() * grid.hy() * scale);

    let mut max = 0.0f64;
    let mut points = 0usize;
    let mut non_finite = false;
    for j in half..ny - half {
        for i in half..nx - half {
            let (x, yv) = (grid.x(i), grid.y(j));
            if grid.excluded(x, yv) {
                continue;
            }
            let mut dxx = 0.0;
            let mut dyy = 0.0;
            for (k, c) in w.iter().enumerate() {
                dxx += c * vals[j * nx + i + k - half];
                dyy += c * vals[(j + k - half) * nx + i];
            }
            let r = libm::fabs(dxx / hx2 + dyy / hy2 - u(x, yv) * vals[j * nx + i]);
            points += 1;
            if r.is_finite() {
                max = max.max(r);
            } else {
                non_finite = true;
            }
        }
    }
    if points == 0 {
        return Err(Error::AllPointsExcluded);
    }
    let max_residual = if non_finite { f64::NAN } else { max };
    let verdict = if max_residual <= tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ResidualReport {
        check: "fd_residual".to_string(),
        mode: Mode::Numeric,
        verdict,
        detail: Detail::Numeric {
            max_residual,
            tolerance,
            points,
            grid: Some(grid.clone()),
            order: Some(order),
        },
        params: Vec::new(),
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darboux::transform_solution;
    use crate::harmonic::HarmonicPair;
    use crate::poly::BiPoly;

    fn poly(s: &str) -> RatFn {
        RatFn::from_poly(s.parse().unwrap())
    }
    fn b0() -> RatFn {
        RatFn::new("x".parse().unwrap(), "x^2 + y^2 + 1".parse().unwrap()).unwrap()
    }
    fn u0() -> RatFn {
        RatFn::from_factors("-8".parse().unwrap(), [("x^2 + y^2 + 1".parse().unwrap(), 2)]).unwrap()
    }

    #[test]
    fn eq12_examples() {
        assert!(check_eq12(&poly("x^2 - y^2")).unwrap().passed());
        assert!(check_eq12(&b0()).unwrap().passed());
        let r = check_eq12(&poly("x^2")).unwrap();
        assert!(!r.passed());
        assert_eq!(check_eq12(&poly("3")).unwrap_err(), Error::ConstantB);
    }

    #[test]
    fn eq12_fails_on_x_squared_with_cubic_residual() {
        // Hand expansion with B = x²: B_x = 2x, B_xx = 2, ΔB = 2, G = 4x²,
        // first residual = −(0 + x²·2x·2 + 2x·4x²)·2 + 0 = −24x³.
        let [e1, e2] = eq12_residuals(&poly("x^2")).unwrap();
        assert_eq!(e1.num(), &"-24*x^3".parse::<BiPoly>().unwrap());
        assert!(e2.is_zero());
    }

    #[test]
    fn schrodinger_examples() {
        assert!(check_schrodinger(&poly("x"), &RatFn::zero()).unwrap().passed());
        assert!(check_schrodinger(&b0(), &u0()).unwrap().passed());
        assert!(!check_schrodinger(&poly("x"), &RatFn::one()).unwrap().passed());
    }

    #[test]
    fn potential_system_examples() {
        assert!(check_potential_system(&poly("x"), &poly("y")).unwrap().passed());
        assert!(check_potential_system(&poly("x^2 - y^2"), &poly("2*x*y")).unwrap().passed());
        assert!(!check_potential_system(&poly("x"), &poly("x")).unwrap().passed());
    }

    #[test]
    fn new_potential_system_examples() {
        for seed in [
            HarmonicPair::new(BiPoly::one(), BiPoly::zero()).unwrap(),
            HarmonicPair::new(BiPoly::zero(), BiPoly::one()).unwrap(),
        ] {
            let out = transform_solution(&b0(), &seed).unwrap();
            assert!(check_new_potential_system(&b0(), &out).unwrap().passed());
        }
        let seed = HarmonicPair::new(BiPoly::one(), BiPoly::zero()).unwrap();
        let mut out = transform_solution(&b0(), &seed).unwrap();
        out.w_tilde = out.w_tilde.add(&RatFn::one()).unwrap();
        assert!(!check_new_potential_system(&b0(), &out).unwrap().passed());
    }

    #[test]
    fn transformed_seeds_solve_new_equation() {
        let b = b0();
        let u = crate::darboux::potential_from_b(&b).unwrap();
        let (r1, r2) = crate::darboux::r_coeffs(&b).unwrap();
        let c1 = HarmonicPair::new(BiPoly::one(), BiPoly::zero()).unwrap();
        let out = transform_solution(&b, &c1).unwrap();
        assert!(check_equal(&out.y_tilde, &r1).unwrap().passed());
        assert!(check_schrodinger(&r1, &u0()).unwrap().passed());
        let c2 = HarmonicPair::new(BiPoly::zero(), BiPoly::one()).unwrap();
        let out = transform_solution(&b, &c2).unwrap();
        assert!(check_equal(&out.y_tilde, &r2).unwrap().passed());
        assert!(check_schrodinger(&out.y_tilde, &u).unwrap().passed());
    }

    #[test]
    fn fd_linear_is_exact() {
        let g = GridSpec::square(-1.0, 1.0, 21).unwrap();
        let r = fd_residual(&|_, _| 0.0, &|x, _| x, &g, 2, 1e-12).unwrap();
        assert!(r.passed(), "{:?}", r);
        let r = fd_residual(&|_, _| 0.0, &|x, y| 3.0 * x - y, &g, 4, 1e-12).unwrap();
        assert!(r.max_residual().unwrap() < 1e-12);
    }

    #[test]
    fn fd_errors() {
        assert!(GridSpec::square(0.0, 1.0, 1).is_err());
        assert!(GridSpec::square(1.0, 1.0, 5).is_err());
        let g = GridSpec::square(-1.0, 1.0, 5).unwrap().excluding(vec![(0.0, 0.0)], 10.0);
        assert_eq!(
            fd_residual(&|_, _| 0.0, &|x, _| x, &g, 2, 1.0).unwrap_err(),
            Error::AllPointsExcluded
        );
        let g = GridSpec::square(-1.0, 1.0, 5).unwrap();
        assert_eq!(fd_residual(&|_, _| 0.0, &|x, _| x, &g, 3, 1.0).unwrap_err(), Error::StencilOrder(3));
    }

    #[test]
    fn fd_non_finite_fails() {
        let g = GridSpec::square(-1.0, 1.0, 11).unwrap();
        let r = fd_residual(&|_, _| 0.0, &|x, _| 1.0 / x, &g, 2, 1.0).unwrap();
        assert!(!r.passed());
        assert!(r.max_residual().unwrap().is_nan());
    }
}
