//! Grid sampling and CSV/JSON output.

use std::io::Write;

use serde_json::Value;

use crate::error::CliError;

/// One axis `lo:hi:count`. A single sample needs `lo == hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::usage(format!("bad axis `{s}`: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count] = parts.as_slice() else {
            return Err(bad("expected lo:hi:count"));
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad("lo is not a number"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad("hi is not a number"))?;
        let count: usize = count.trim().parse().map_err(|_| bad("count is not a positive integer"))?;
        if !lo.is_finite() || !hi.is_finite() {
            return Err(bad("bounds must be finite"));
        }
        match count {
            0 => Err(bad("count must be positive")),
            1 if lo != hi => Err(bad("a single sample needs lo == hi")),
            1 => Ok(Self { lo, hi, count }),
            _ if lo >= hi => Err(bad("need lo < hi")),
            _ => Ok(Self { lo, hi, count }),
        }
    }

    pub fn at(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.at(i))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Samples `f` row-major with `y` as the outer loop.
pub fn sample(f: &dyn Fn(f64, f64) -> f64, xs: &Axis, ys: &Axis) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(xs.count * ys.count);
    for y in ys.points() {
        for x in xs.points() {
            out.push((x, y, f(x, y)));
        }
    }
    out
}

/// 17 significant digits, enough for an exact round trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the samples and returns the number of non-finite values.
pub fn write_samples(rows: &[(f64, f64, f64)], format: Format, w: &mut dyn Write) -> Result<usize, CliError> {
    let non_finite = rows.iter().filter(|r| !r.2.is_finite()).count();
    match format {
        Format::Csv => {
            writeln!(w, "x,y,value")?;
            for &(x, y, v) in rows {
                let v = if v.is_finite() { fmt_f64(v) } else { String::new() };
                writeln!(w, "{},{},{}", fmt_f64(x), fmt_f64(y), v)?;
            }
        }
        Format::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|&(x, y, v)| {
                    let v = if v.is_finite() { Value::from(v) } else { Value::Null };
                    Value::Array(vec![Value::from(x), Value::from(y), v])
                })
                .collect();
            serde_json::to_writer(&mut *w, &Value::Array(arr))?;
            writeln!(w)?;
        }
    }
    Ok(non_finite)
}
