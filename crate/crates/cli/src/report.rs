//! JSON rendering of reports and rational functions.

use darboux_core::verify::{Detail, Mode, ResidualReport};
use darboux_core::RatFn;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Serialize)]
struct ReportJson<'a> {
    check: &'a str,
    mode: &'static str,
    verdict: &'static str,
    max_residual: Option<f64>,
    residual_terms: Option<usize>,
    tolerance: Option<f64>,
    #[serde(serialize_with = "ordered_map")]
    params: &'a [(String, String)],
    seed: Option<u64>,
}

fn ordered_map<S: Serializer>(pairs: &&[(String, String)], s: S) -> Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(pairs.len()))?;
    for (k, v) in pairs.iter() {
        m.serialize_entry(k, v)?;
    }
    m.end()
}

/// `{"check", "mode", "verdict", "max_residual", "residual_terms", "tolerance", "params", "seed"}`;
/// a NaN residual serializes as `null`.
pub fn report_json(r: &ResidualReport) -> Value {
    let tolerance = match &r.detail {
        Detail::Numeric { tolerance, .. } => Some(*tolerance),
        Detail::Exact { .. } => None,
    };
    serde_json::to_value(ReportJson {
        check: &r.check,
        mode: match r.mode {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
        },
        verdict: if r.passed() { "pass" } else { "fail" },
        max_residual: r.max_residual(),
        residual_terms: r.residual_terms(),
        tolerance,
        params: &r.params,
        seed: r.seed,
    })
    .expect("report serializes")
}

pub fn reports_json(rs: &[ResidualReport]) -> Value {
    Value::Array(rs.iter().map(report_json).collect())
}

/// Factored denominator text, e.g. `(x^2 + y^2 + 1)^2`, or `1`.
pub fn den_text(f: &RatFn) -> String {
    let parts: Vec<String> = f
        .den_factors()
        .map(|(p, e)| if e == 1 { format!("({p})") } else { format!("({p})^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn ratfn_json(f: &RatFn) -> Value {
    json!({ "num": f.num().to_string(), "den": den_text(f) })
}
