//! Sparse bivariate polynomials in `x, y` over arbitrary-precision rationals.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};
use core::str::FromStr;
use core::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Rational, Result};

pub const DEFAULT_EXPONENT_CAP: u32 = 256;

static EXPONENT_CAP: AtomicU32 = AtomicU32::new(DEFAULT_EXPONENT_CAP);

/// Largest exponent of `x` or `y` any product may produce before
/// [`Error::ExponentCapExceeded`] is raised.
pub fn exponent_cap() -> u32 {
    EXPONENT_CAP.load(Ordering::Relaxed)
}

/// Process-wide override of the exponent cap, read by every multiplication.
pub fn set_exponent_cap(cap: u32) {
    EXPONENT_CAP.store(cap, Ordering::Relaxed);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

/// Polynomial stored as a map from `(i, j)` (the monomial `x^i y^j`) to a
/// nonzero coefficient.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    /// `a·x + b·y + c`.
    pub fn linear(a: &Rational, b: &Rational, c: &Rational) -> Self {
        Self::from_terms([
            ((1, 0), a.clone()),
            ((0, 1), b.clone()),
            ((0, 0), c.clone()),
        ])
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), Rational)>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| match var {
                Var::X => i,
                Var::Y => j,
            })
            .max()
    }

    /// Leading term in graded-lex order (total degree first, then the power of `x`).
    pub fn leading_term(&self) -> Option<((u32, u32), &Rational)> {
        self.terms
            .iter()
            .max_by_key(|(&(i, j), _)| (i + j, i))
            .map(|(&e, c)| (e, c))
    }

    /// Terms in graded-lex descending order, the canonical printing order.
    pub fn graded_terms(&self) -> Vec<((u32, u32), &Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(&e, c)| (e, c)).collect();
        v.sort_by(|a, b| {
            let ka = (a.0 .0 + a.0 .1, a.0 .0);
            let kb = (b.0 .0 + b.0 .1, b.0 .0);
            kb.cmp(&ka)
        });
        v
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Exact product. Coefficients are cleared to integers first so the inner
    /// loop runs on `BigInt` only.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let cap = exponent_cap();
        let (ax, ay) = self.max_exponents();
        let (bx, by) = other.max_exponents();
        let needed = (ax + bx).max(ay + by);
        if needed > cap {
            return Err(Error::ExponentCapExceeded { needed, cap });
        }
        let (ia, da) = self.integer_form();
        let (ib, db) = other.integer_form();
        let den = da * db;

        let w = (ax + bx + 1) as usize;
        let h = (ay + by + 1) as usize;
        let mut terms = BTreeMap::new();
        if w.saturating_mul(h) <= (1 << 20) {
            let mut acc = vec![BigInt::zero(); w * h];
            for ((i1, j1), c1) in &ia {
                for ((i2, j2), c2) in &ib {
                    acc[(j1 + j2) as usize * w + (i1 + i2) as usize] += c1 * c2;
                }
            }
            for (k, c) in acc.into_iter().enumerate() {
                if !c.is_zero() {
                    let e = ((k % w) as u32, (k / w) as u32);
                    terms.insert(e, Rational::new(c, den.clone()));
                }
            }
        } else {
            let mut acc: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
            for ((i1, j1), c1) in &ia {
                for ((i2, j2), c2) in &ib {
                    *acc.entry((i1 + i2, j1 + j2)).or_default() += c1 * c2;
                }
            }
            for (e, c) in acc {
                if !c.is_zero() {
                    terms.insert(e, Rational::new(c, den.clone()));
                }
            }
        }
        Ok(Self { terms })
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    fn max_exponents(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(a, b), &(i, j)| (a.max(i), b.max(j)))
    }

    /// Integer coefficients and the common denominator `d` with `self = P / d`.
    fn integer_form(&self) -> (Vec<((u32, u32), BigInt)>, BigInt) {
        let d = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let v = self
            .terms
            .iter()
            .map(|(&e, c)| (e, c.numer() * (&d / c.denom())))
            .collect();
        (v, d)
    }

    pub fn diff(&self, var: Var) -> Self {
        let mut terms = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            match var {
                Var::X if i > 0 => {
                    terms.insert((i - 1, j), c * Rational::from_integer(i.into()));
                }
                Var::Y if j > 0 => {
                    terms.insert((i, j - 1), c * Rational::from_integer(j.into()));
                }
                _ => {}
            }
        }
        Self { terms }
    }

    pub fn laplacian(&self) -> Self {
        &self.diff(Var::X).diff(Var::X) + &self.diff(Var::Y).diff(Var::Y)
    }

    /// Antiderivative in `var` with zero constant of integration.
    pub fn integrate(&self, var: Var) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            match var {
                Var::X => out.add_term((i + 1, j), c / Rational::from_integer((i + 1).into())),
                Var::Y => out.add_term((i, j + 1), c / Rational::from_integer((j + 1).into())),
            }
        }
        out
    }

    /// `p(x, 0)` as a polynomial in `x`.
    pub fn restrict_y_zero(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(&(_, j), _)| j == 0)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let (mx, my) = self.max_exponents();
        let xp = powers(x, mx);
        let yp = powers(y, my);
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (&(i, j), c)| {
                acc + c * &xp[i as usize] * &yp[j as usize]
            })
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        FloatPoly::from(self).eval(x, y)
    }

    /// Divides by the leading coefficient; returns `(monic, leading coeff)`.
    pub fn make_monic(&self) -> (Self, Rational) {
        match self.leading_term() {
            None => (Self::zero(), Rational::one()),
            Some((_, lc)) => {
                let lc = lc.clone();
                (self.scale(&lc.recip()), lc)
            }
        }
    }
}

fn powers(v: &Rational, n: u32) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Rational::one());
    for k in 0..n as usize {
        let next = &out[k] * v;
        out.push(next);
    }
    out
}

/// Double-precision snapshot of a polynomial for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    terms: Vec<(u32, u32, f64)>,
    max: (u32, u32),
}

impl From<&BiPoly> for FloatPoly {
    fn from(p: &BiPoly) -> Self {
        Self {
            terms: p
                .terms
                .iter()
                .map(|(&(i, j), c)| (i, j, c.to_f64().unwrap_or(f64::NAN)))
                .collect(),
            max: p.max_exponents(),
        }
    }
}

impl FloatPoly {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut xp = vec![1.0; self.max.0 as usize + 1];
        let mut yp = vec![1.0; self.max.1 as usize + 1];
        for k in 1..xp.len() {
            xp[k] = xp[k - 1] * x;
        }
        for k in 1..yp.len() {
            yp[k] = yp[k - 1] * y;
        }
        self.terms
            .iter()
            .map(|&(i, j, c)| c * xp[i as usize] * yp[j as usize])
            .sum()
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: BiPoly) -> BiPoly {
        &self + &rhs
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: BiPoly) -> BiPoly {
        &self - &rhs
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, i: u32, j: u32) -> fmt::Result {
    let mut first = true;
    for (name, e) in [("x", i), ("y", j)] {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(name)?;
        if e > 1 {
            write!(f, "^{}", e)?;
        }
    }
    Ok(())
}

/// Canonical rendering: graded-lex order, `x` before `y`, explicit `^`
/// powers, coefficients as `p/q`, e.g. `x^2 - 3/4*x*y + 1`.
impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, ((i, j), c)) in self.graded_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if i + j == 0 {
                write!(f, "{}", a)?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", a)?;
                }
                write_monomial(f, i, j)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({})", self)
    }
}

impl FromStr for BiPoly {
    type Err = Error;

    /// Accepts the canonical rendering and, more loosely, any expression
    /// built from rationals, `x`, `y`, `+ - *`, `^n` and parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.uint()?;
            let n = n
                .to_u32()
                .ok_or_else(|| self.err("exponent too large"))?;
            return base.pow(n);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BiPoly> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(BiPoly::x())
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(BiPoly::y())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                let mut q = Rational::from_integer(n);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.uint()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    q /= Rational::from_integer(d);
                }
                Ok(BiPoly::constant(q))
            }
            _ => Err(self.err("expected number, `x`, `y` or `(`")),
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.err("utf8"))?;
        <BigInt as num_traits::Num>::from_str_radix(s, 10).map_err(|_| self.err("bad integer"))
    }
}

/// Renders a list of polynomials, used in diagnostics.
pub fn join(polys: &[BiPoly], sep: &str) -> String {
    let mut s = String::new();
    for (k, p) in polys.iter().enumerate() {
        if k > 0 {
            s.push_str(sep);
        }
        s.push_str(&p.to_string());
    }
    s
}
