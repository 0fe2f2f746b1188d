//! Quotients of [`BiPoly`] kept without any gcd reduction.
//!
//! The denominator is held as a product of powers of nonconstant monic
//! factors, `num / Π fᵢ^eᵢ`. Factors are identified by exact equality only,
//! never by factorization, so nothing is ever reduced to lowest terms: a sum
//! takes the factor-wise maximum exponent and a product adds exponents.
//! Differentiation uses the squarefree part `P = Π fᵢ`:
//!
//! `∂(N/F) = (N'·P − N·Σ eᵢ fᵢ' P/fᵢ) / (F·P)`
//!
//! which is the quotient rule `(N'F − NF')/F²` with the known factor `F/P`
//! divided out of both sides. Without it every derivative would square the
//! denominator.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::poly::{BiPoly, FloatPoly, Var};
use crate::{Error, Rational, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RatFn {
    num: BiPoly,
    den: BTreeMap<BiPoly, u32>,
}

impl RatFn {
    pub fn zero() -> Self {
        Self::from_poly(BiPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(BiPoly::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(BiPoly::constant(c))
    }

    pub fn from_poly(num: BiPoly) -> Self {
        Self {
            num,
            den: BTreeMap::new(),
        }
    }

    /// `num / den`, with `den` kept as a single factor.
    pub fn new(num: BiPoly, den: BiPoly) -> Result<Self> {
        Self::from_factors(num, [(den, 1)])
    }

    /// `num / Π fᵢ^eᵢ`. Constant factors are folded into the numerator and
    /// each remaining factor is made monic.
    pub fn from_factors<I>(num: BiPoly, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BiPoly, u32)>,
    {
        let mut out = Self::from_poly(num);
        for (f, e) in factors {
            if f.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            if e == 0 {
                continue;
            }
            let (m, lc) = f.make_monic();
            let scale = num_traits::pow(lc.recip(), e as usize);
            out.num = out.num.scale(&scale);
            if !m.is_constant() {
                *out.den.entry(m).or_insert(0) += e;
            }
        }
        Ok(out)
    }

    pub fn num(&self) -> &BiPoly {
        &self.num
    }

    pub fn den_factors(&self) -> impl Iterator<Item = (&BiPoly, u32)> {
        self.den.iter().map(|(f, &e)| (f, e))
    }

    /// Expanded denominator `Π fᵢ^eᵢ`.
    pub fn den(&self) -> Result<BiPoly> {
        let mut d = BiPoly::one();
        for (f, &e) in &self.den {
            d = d.mul(&f.pow(e)?)?;
        }
        Ok(d)
    }

    /// Total degree of the expanded denominator, computed from the factors.
    pub fn den_degree(&self) -> u32 {
        self.den
            .iter()
            .map(|(f, &e)| f.total_degree().unwrap_or(0) * e)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Constant as a rational function: both derivatives vanish.
    pub fn is_constant(&self) -> Result<bool> {
        Ok(self.diff(Var::X)?.is_zero() && self.diff(Var::Y)?.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            num: self.num.scale(c),
            den: if c.is_zero() {
                BTreeMap::new()
            } else {
                self.den.clone()
            },
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    fn cofactor(&self, target: &BTreeMap<BiPoly, u32>) -> Result<BiPoly> {
        let mut c = BiPoly::one();
        for (f, &e) in target {
            let have = self.den.get(f).copied().unwrap_or(0);
            if e > have {
                c = c.mul(&f.pow(e - have)?)?;
            }
        }
        Ok(c)
    }

    fn combine(&self, other: &Self, sub: bool) -> Result<Self> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(if sub { other.neg() } else { other.clone() });
        }
        let mut den = self.den.clone();
        for (f, &e) in &other.den {
            let slot = den.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        let a = self.num.mul(&self.cofactor(&den)?)?;
        let b = other.num.mul(&other.cofactor(&den)?)?;
        let num = if sub { &a - &b } else { &a + &b };
        Ok(Self { num, den })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut den = self.den.clone();
        for (f, &e) in &other.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        Ok(Self {
            num: self.num.mul(&other.num)?,
            den,
        })
    }

    pub fn mul_poly(&self, p: &BiPoly) -> Result<Self> {
        self.mul(&Self::from_poly(p.clone()))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().div(self)
    }

    /// `self / other`. Denominator factors of `other` that `self` also carries
    /// cancel by exponent; only the remainder is expanded into the numerator.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut den = self.den.clone();
        let mut lifted = BiPoly::one();
        for (f, &e) in &other.den {
            let have = den.get(f).copied().unwrap_or(0);
            if have > e {
                den.insert(f.clone(), have - e);
            } else {
                den.remove(f);
                if e > have {
                    lifted = lifted.mul(&f.pow(e - have)?)?;
                }
            }
        }
        let out = Self {
            num: self.num.mul(&lifted)?,
            den,
        };
        out.mul(&Self::from_factors(BiPoly::one(), [(other.num.clone(), 1)])?)
    }

    pub fn diff(&self, var: Var) -> Result<Self> {
        if self.den.is_empty() {
            return Ok(Self::from_poly(self.num.diff(var)));
        }
        let factors: Vec<(&BiPoly, u32)> = self.den.iter().map(|(f, &e)| (f, e)).collect();
        let mut squarefree = BiPoly::one();
        for (f, _) in &factors {
            squarefree = squarefree.mul(f)?;
        }
        let mut log_term = BiPoly::zero();
        for (k, (f, e)) in factors.iter().enumerate() {
            let df = f.diff(var);
            if df.is_zero() {
                continue;
            }
            let mut t = df.scale(&Rational::from_integer((*e).into()));
            for (m, (g, _)) in factors.iter().enumerate() {
                if m != k {
                    t = t.mul(g)?;
                }
            }
            log_term = &log_term + &t;
        }
        let num = &self.num.diff(var).mul(&squarefree)? - &self.num.mul(&log_term)?;
        let mut den = self.den.clone();
        for e in den.values_mut() {
            *e += 1;
        }
        Ok(Self { num, den })
    }

    pub fn laplacian(&self) -> Result<Self> {
        let xx = self.diff(Var::X)?.diff(Var::X)?;
        let yy = self.diff(Var::Y)?.diff(Var::Y)?;
        xx.add(&yy)
    }

    /// Exact value; fails at a zero of the denominator.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Result<Rational> {
        let mut d = Rational::one();
        for (f, &e) in &self.den {
            let v = f.eval(x, y);
            if v.is_zero() {
                return Err(Error::PoleEvaluation);
            }
            d *= num_traits::pow(v, e as usize);
        }
        Ok(self.num.eval(x, y) / d)
    }

    /// Double-precision value; non-finite at poles.
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.compile().eval(x, y)
    }

    pub fn compile(&self) -> FloatRatFn {
        FloatRatFn {
            num: FloatPoly::from(&self.num),
            den: self
                .den
                .iter()
                .map(|(f, &e)| (FloatPoly::from(f), e as i32))
                .collect(),
        }
    }
}

/// Double-precision snapshot of a [`RatFn`].
#[derive(Clone, Debug)]
pub struct FloatRatFn {
    num: FloatPoly,
    den: Vec<(FloatPoly, i32)>,
}

impl FloatRatFn {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let d: f64 = self.den.iter().map(|(f, e)| libm::pow(f.eval(x, y), *e as f64)).product();
        let v = self.num.eval(x, y) / d;
        if v.is_finite() {
            v
        } else {
            f64::NAN
        }
    }
}

impl From<BiPoly> for RatFn {
    fn from(p: BiPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        for (k, (p, e)) in self.den.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "({})", p)?;
            } else {
                write!(f, "({})^{}", p, e)?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn r(n: &str, d: &str) -> RatFn {
        RatFn::new(n.parse().unwrap(), d.parse().unwrap()).unwrap()
    }
    fn poly(s: &str) -> RatFn {
        RatFn::from_poly(s.parse().unwrap())
    }

    #[test]
    fn arithmetic_examples() {
        let s = r("1", "x").add(&r("1", "y")).unwrap();
        assert_eq!(s.num(), &"x + y".parse::<BiPoly>().unwrap());
        assert_eq!(s.den().unwrap(), "x*y".parse::<BiPoly>().unwrap());

        let a = r("x^2 + 3", "x - y^2");
        assert!(a.sub(&a).unwrap().is_zero());

        let q = r("x", "y").div(&r("x", "y")).unwrap();
        assert!(q.sub(&RatFn::one()).unwrap().is_zero());
        assert!(r("x", "y").div(&RatFn::zero()).is_err());
    }

    #[test]
    fn zero_test_examples() {
        let f = r("x^2 - y^2", "x - y").sub(&poly("x + y")).unwrap();
        assert!(f.is_zero());
        let g = r("1", "x")
            .add(&r("1", "y"))
            .unwrap()
            .sub(&r("x + y", "x*y"))
            .unwrap();
        assert!(g.is_zero());
        assert!(!r("1", "x").sub(&r("1", "y")).unwrap().is_zero());
    }

    #[test]
    fn derivative_examples() {
        let d = r("x", "y").diff(Var::Y).unwrap();
        assert!(d.sub(&r("-x", "y^2")).unwrap().is_zero());

        let d = r("1", "x^2 + y^2").diff(Var::X).unwrap();
        let want = RatFn::from_factors("-2*x".parse().unwrap(), [("x^2+y^2".parse().unwrap(), 2)]).unwrap();
        assert!(d.sub(&want).unwrap().is_zero());
        assert_eq!(d.den_degree(), 4);

        assert!(RatFn::constant(rat(5, 1)).diff(Var::X).unwrap().is_zero());
    }

    #[test]
    fn derivative_matches_plain_quotient_rule() {
        let f = RatFn::from_factors(
            "x^3*y - 2*y + 1".parse().unwrap(),
            [("x^2 + y^2 + 1".parse().unwrap(), 2), ("x - y".parse().unwrap(), 1)],
        )
        .unwrap();
        let n = f.num().clone();
        let d = f.den().unwrap();
        for v in [Var::X, Var::Y] {
            let qr = RatFn::new(
                &n.diff(v).mul(&d).unwrap() - &n.mul(&d.diff(v)).unwrap(),
                d.mul(&d).unwrap(),
            )
            .unwrap();
            assert!(f.diff(v).unwrap().sub(&qr).unwrap().is_zero());
        }
    }

    #[test]
    fn eval_examples() {
        assert_eq!(poly("x^2 + y^2").eval(&rat(3, 1), &rat(4, 1)).unwrap(), rat(25, 1));
        assert_eq!(
            r("x", "x^2 + y^2").eval(&rat(0, 1), &rat(0, 1)),
            Err(Error::PoleEvaluation)
        );
        let u0 = RatFn::from_factors("-8".parse().unwrap(), [("x^2 + y^2 + 1".parse().unwrap(), 2)]).unwrap();
        assert_eq!(u0.eval(&rat(0, 1), &rat(0, 1)).unwrap(), rat(-8, 1));
        assert_eq!(u0.eval_f64(0.0, 0.0), -8.0);
        assert!(r("1", "x").eval_f64(0.0, 1.0).is_nan());
    }

    #[test]
    fn constant_denominators_fold_into_numerator() {
        let f = r("x", "4");
        assert_eq!(f.den_factors().count(), 0);
        assert_eq!(f.num(), &"1/4*x".parse::<BiPoly>().unwrap());
        assert!(RatFn::new(BiPoly::x(), BiPoly::zero()).is_err());
    }
}
