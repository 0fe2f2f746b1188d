//! Exact null spaces over the rationals by fraction-free (Bareiss) elimination.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Basis of `{v : A v = 0}` for a rational matrix given by rows.
///
/// Each basis vector has integer entries with content 1 and a positive first
/// nonzero entry. Vectors are ordered by their free column.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .map(|r| integer_row(r))
        .collect();

    // Bareiss forward elimination; every intermediate entry stays integral.
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }

    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::one();
        for (k, &pc) in pivots.iter().enumerate().rev() {
            let mut s = Rational::zero();
            for j in pc + 1..ncols {
                if !m[k][j].is_zero() && !v[j].is_zero() {
                    s += Rational::from_integer(m[k][j].clone()) * &v[j];
                }
            }
            v[pc] = -s / Rational::from_integer(m[k][pc].clone());
        }
        basis.push(normalize(&v));
    }
    basis
}

fn integer_row(r: &[Rational]) -> Vec<BigInt> {
    let d = r.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    r.iter().map(|c| c.numer() * (&d / c.denom())).collect()
}

/// Integer vector with content 1 and positive leading entry.
pub fn normalize(v: &[Rational]) -> Vec<BigInt> {
    let mut w = integer_row(v);
    let g = w.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return w;
    }
    let flip = w.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    for c in &mut w {
        *c = &*c / &g;
        if flip {
            *c = -&*c;
        }
    }
    w
}

/// Solves `A x = b` for a square or overdetermined consistent system; `None`
/// if inconsistent or underdetermined.
pub fn solve(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = rows.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(-b.clone());
            r
        })
        .collect();
    let ns = nullspace(&aug, n + 1);
    // Unique solution iff the null space is one-dimensional with a nonzero
    // last coordinate.
    if ns.len() != 1 || ns[0][n].is_zero() {
        return None;
    }
    let t = Rational::from_integer(ns[0][n].clone());
    Some(
        ns[0][..n]
            .iter()
            .map(|c| Rational::from_integer(c.clone()) / &t)
            .collect(),
    )
}
