//! Harmonic seeds and pole-sum numerators.
//!
//! A seed is a pair `(Y, Q)` with `Y_x = Q_y`, `Y_y = −Q_x`: `Y` solves the
//! free equation and `Q` is the nonlocal variable consumed by the transform.
//! Pole sums `S = Σ (pᵢ(x−xᵢ) + qᵢ(y−yᵢ)) / |z−zᵢ|² = N/M` feed the rational
//! families.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg;
use crate::poly::{BiPoly, Var};
use crate::{Error, Rational, RatFn, Result};

/// Poles `(xᵢ, yᵢ)`, weights `(pᵢ, qᵢ)` and the constant `C` of `B = N/(M + C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleConfig {
    pub poles: Vec<(Rational, Rational)>,
    pub weights: Vec<(Rational, Rational)>,
    pub c: Rational,
}

impl PoleConfig {
    pub fn new(
        poles: Vec<(Rational, Rational)>,
        weights: Vec<(Rational, Rational)>,
        c: Rational,
    ) -> Result<Self> {
        if poles.is_empty() {
            return Err(Error::EmptyPoles);
        }
        if poles.len() != weights.len() {
            return Err(Error::WeightCount {
                poles: poles.len(),
                weights: weights.len(),
            });
        }
        ensure_distinct(&poles)?;
        Ok(Self { poles, weights, c })
    }

    pub fn n(&self) -> usize {
        self.poles.len() - 1
    }
}

pub(crate) fn ensure_distinct(poles: &[(Rational, Rational)]) -> Result<()> {
    for (i, a) in poles.iter().enumerate() {
        if poles[i + 1..].contains(a) {
            return Err(Error::DuplicatePoles);
        }
    }
    Ok(())
}

/// A solution `Y` of `ΔY = 0` together with its nonlocal partner `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicPair {
    pub y: BiPoly,
    pub q: BiPoly,
}

impl HarmonicPair {
    /// Checks `Y_x − Q_y = 0` and `Y_y + Q_x = 0` exactly.
    pub fn new(y: BiPoly, q: BiPoly) -> Result<Self> {
        let pair = Self { y, q };
        if !pair.is_valid() {
            return Err(Error::InvalidSeed);
        }
        Ok(pair)
    }

    pub fn is_valid(&self) -> bool {
        (&self.y.diff(Var::X) - &self.q.diff(Var::Y)).is_zero()
            && (&self.y.diff(Var::Y) + &self.q.diff(Var::X)).is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            y: self.y.scale(c),
            q: self.q.scale(c),
        }
    }
}

/// Real and imaginary parts of `(x + iy)^k`.
pub fn z_power(k: u32) -> (BiPoly, BiPoly) {
    let mut re = BiPoly::one();
    let mut im = BiPoly::zero();
    let (x, y) = (BiPoly::x(), BiPoly::y());
    for _ in 0..k {
        let nre = &re.mul(&x).expect("within cap") - &im.mul(&y).expect("within cap");
        let nim = &re.mul(&y).expect("within cap") + &im.mul(&x).expect("within cap");
        re = nre;
        im = nim;
    }
    (re, im)
}

/// Seeds `(Re zᵏ, Im zᵏ)` for `k = 0..=max_degree`, followed by the
/// pure-nonlocal seed `(0, 1)`.
pub fn harmonic_basis(max_degree: u32) -> Vec<HarmonicPair> {
    let mut out: Vec<_> = (0..=max_degree)
        .map(|k| {
            let (y, q) = z_power(k);
            HarmonicPair { y, q }
        })
        .collect();
    out.push(HarmonicPair {
        y: BiPoly::zero(),
        q: BiPoly::one(),
    });
    out
}

/// Harmonic conjugate `Q` of `Y`, normalized so that `Q(0,0) = 0`.
///
/// Integrates `dQ = −Y_y dx + Y_x dy` along `(0,0) → (x,0) → (x,y)`.
pub fn conjugate(y: &BiPoly) -> Result<BiPoly> {
    if !y.laplacian().is_zero() {
        return Err(Error::NonHarmonic);
    }
    let along_x = (-&y.diff(Var::Y).restrict_y_zero()).integrate(Var::X);
    let along_y = y.diff(Var::X).integrate(Var::Y);
    Ok(&along_x + &along_y)
}

/// `(x − a)² + (y − b)²`.
pub fn dist_sq(a: &Rational, b: &Rational) -> BiPoly {
    let two = Rational::from_integer(2.into());
    BiPoly::from_terms([
        ((2, 0), Rational::one()),
        ((0, 2), Rational::one()),
        ((1, 0), -(&two * a)),
        ((0, 1), -(&two * b)),
        ((0, 0), a * a + b * b),
    ])
}

/// Numerator `N` and denominator `M = Π |z − zᵢ|²` of the pole sum.
pub fn pole_sum(config: &PoleConfig) -> Result<(BiPoly, BiPoly)> {
    ensure_distinct(&config.poles)?;
    let dists: Vec<BiPoly> = config.poles.iter().map(|(a, b)| dist_sq(a, b)).collect();
    let mut m = BiPoly::one();
    for d in &dists {
        m = m.mul(d)?;
    }
    let mut n = BiPoly::zero();
    for (i, ((a, b), (p, q))) in config.poles.iter().zip(&config.weights).enumerate() {
        let mut t = BiPoly::linear(p, q, &-(p * a + q * b));
        for (j, d) in dists.iter().enumerate() {
            if j != i {
                t = t.mul(d)?;
            }
        }
        n = &n + &t;
    }
    Ok((n, m))
}

/// The pole sum as a rational function, term by term (one factor per pole).
pub fn pole_sum_terms(config: &PoleConfig) -> Result<RatFn> {
    let mut s = RatFn::zero();
    for ((a, b), (p, q)) in config.poles.iter().zip(&config.weights) {
        let t = RatFn::new(BiPoly::linear(p, q, &-(p * a + q * b)), dist_sq(a, b))?;
        s = s.add(&t)?;
    }
    Ok(s)
}

/// A pole location with its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pole {
    pub at: (Rational, Rational),
    pub order: u32,
}

/// Solution space of `ΔN = 0` for the pole-sum numerator.
///
/// Unknowns are ordered pole by pole (first appearance), and for a pole of
/// order `m` as `(p₁, q₁, …, p_m, q_m)`, where `(p_k, q_k)` weights
/// `Re((p_k + i q_k) · conj(z − zᵢ)^k) / |z − zᵢ|^{2k}`. With distinct poles
/// this is exactly `(p₀, q₀, p₁, q₁, …)` of the plain pole sum. A pole listed
/// several times is merged into one pole of that order.
#[derive(Clone, Debug)]
pub struct NumeratorSpace {
    pub poles: Vec<Pole>,
    /// Unit-weight numerator contribution of each unknown.
    pub generators: Vec<BiPoly>,
    /// Integer basis vectors of the solution space.
    pub basis: Vec<Vec<BigInt>>,
}

impl NumeratorSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn unknowns(&self) -> usize {
        self.generators.len()
    }

    /// Numerator for an explicit weight vector (not checked against the family).
    pub fn numerator(&self, weights: &[Rational]) -> BiPoly {
        self.generators
            .iter()
            .zip(weights)
            .fold(BiPoly::zero(), |acc, (g, w)| &acc + &g.scale(w))
    }

    /// Weight vector `Σ cₖ basisₖ`.
    pub fn combination(&self, coeffs: &[Rational]) -> Vec<Rational> {
        let mut w = vec![Rational::zero(); self.unknowns()];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (slot, v) in w.iter_mut().zip(b) {
                *slot += c * Rational::from_integer(v.clone());
            }
        }
        w
    }

    /// Coordinates of `weights` in the basis, or `None` if outside the span.
    pub fn coordinates(&self, weights: &[Rational]) -> Option<Vec<Rational>> {
        if self.basis.is_empty() {
            return weights.iter().all(|w| w.is_zero()).then(Vec::new);
        }
        let rows: Vec<Vec<Rational>> = (0..self.unknowns())
            .map(|i| {
                self.basis
                    .iter()
                    .map(|b| Rational::from_integer(b[i].clone()))
                    .collect()
            })
            .collect();
        linalg::solve(&rows, weights)
    }

    /// Member of the family whose weights at unknown positions `idx` equal
    /// `values`, if that member exists and is unique.
    pub fn member_with(&self, idx: &[usize], values: &[Rational]) -> Option<Vec<Rational>> {
        let rows: Vec<Vec<Rational>> = idx
            .iter()
            .map(|&i| {
                self.basis
                    .iter()
                    .map(|b| Rational::from_integer(b[i].clone()))
                    .collect()
            })
            .collect();
        let c = linalg::solve(&rows, values)?;
        Some(self.combination(&c))
    }

    pub fn denominator(&self) -> Result<BiPoly> {
        let mut m = BiPoly::one();
        for p in &self.poles {
            m = m.mul(&dist_sq(&p.at.0, &p.at.1).pow(p.order)?)?;
        }
        Ok(m)
    }
}

fn group_poles(poles: &[(Rational, Rational)]) -> Vec<Pole> {
    let mut out: Vec<Pole> = Vec::new();
    for p in poles {
        match out.iter_mut().find(|q| &q.at == p) {
            Some(q) => q.order += 1,
            None => out.push(Pole {
                at: p.clone(),
                order: 1,
            }),
        }
    }
    out
}

/// `Re((p + iq)·conj(z − a)^k)` for unit `(p, q)` choices.
fn multipole_parts(a: &Rational, b: &Rational, k: u32) -> Result<(BiPoly, BiPoly)> {
    // conj(z − a) = (x − a) − i(y − b)
    let xr = BiPoly::linear(&Rational::one(), &Rational::zero(), &-a.clone());
    let yi = BiPoly::linear(&Rational::zero(), &-Rational::one(), b);
    let mut re = BiPoly::one();
    let mut im = BiPoly::zero();
    for _ in 0..k {
        let nre = &re.mul(&xr)? - &im.mul(&yi)?;
        let nim = &re.mul(&yi)? + &im.mul(&xr)?;
        re = nre;
        im = nim;
    }
    // Re((p + iq)(re + i·im)) = p·re − q·im
    Ok((re, -im))
}

/// Solves `ΔN = 0` for the weights of the pole-sum numerator over `poles`.
///
/// `ΔN` is expanded with coefficients linear in the unknowns and the
/// resulting homogeneous system is solved exactly; an empty basis is a
/// valid outcome.
pub fn laplace_constrained_numerator(poles: &[(Rational, Rational)]) -> Result<NumeratorSpace> {
    if poles.is_empty() {
        return Err(Error::EmptyPoles);
    }
    let grouped = group_poles(poles);
    let dists: Vec<BiPoly> = grouped
        .iter()
        .map(|p| dist_sq(&p.at.0, &p.at.1))
        .collect();

    let mut generators = Vec::new();
    for (i, pole) in grouped.iter().enumerate() {
        let mut others = BiPoly::one();
        for (j, (d, q)) in dists.iter().zip(&grouped).enumerate() {
            if j != i {
                others = others.mul(&d.pow(q.order)?)?;
            }
        }
        for k in 1..=pole.order {
            let cofactor = others.mul(&dists[i].pow(pole.order - k)?)?;
            let (gp, gq) = multipole_parts(&pole.at.0, &pole.at.1, k)?;
            generators.push(gp.mul(&cofactor)?);
            generators.push(gq.mul(&cofactor)?);
        }
    }

    let laps: Vec<BiPoly> = generators.iter().map(BiPoly::laplacian).collect();
    let mut monomials: Vec<(u32, u32)> = laps.iter().flat_map(|l| l.terms().map(|(&e, _)| e)).collect();
    monomials.sort_unstable();
    monomials.dedup();
    let rows: Vec<Vec<Rational>> = monomials
        .iter()
        .map(|&(i, j)| laps.iter().map(|l| l.coeff(i, j)).collect())
        .collect();
    let basis = linalg::nullspace(&rows, generators.len());

    Ok(NumeratorSpace {
        poles: grouped,
        generators,
        basis,
    })
}

/// True if every coefficient is an integer multiple with nonnegative leading sign.
pub fn is_canonical(v: &[BigInt]) -> bool {
    v.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive())
}
