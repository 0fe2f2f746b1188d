//! Parameter JSON for the CLI.
//!
//! Rationals travel as strings (`"p/q"`, `"3"`, `"-0.25"`); plain JSON
//! integers are also accepted, JSON floats are not. Keys left out take the
//! family default, unknown keys are rejected. Presets take no parameters.

use darboux_core::families::{
    build, closed_potential, preset, FamilyParams, FamilyTag, TanhSolution, WeightsChoice,
};
use darboux_core::harmonic::{pole_sum, PoleConfig};
use darboux_core::{parse_rational, rat, BiPoly, RatFn, Rational};
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{Map, Value};

use crate::error::CliError;

pub const FAMILY_NAMES: [&str; 8] = ["b0", "b1", "b2", "b3", "tanh", "custom", "tsarev-1", "tsarev-2"];

/// A fully resolved family instance.
#[derive(Clone, Debug)]
pub enum Instance {
    Rational {
        params: FamilyParams,
        preset: Option<&'static str>,
    },
    Tanh(TanhSolution),
    Custom(PoleConfig),
}

/// `B`, its potential and the derived constants of a rational instance.
#[derive(Clone, Debug)]
pub struct Built {
    pub b: RatFn,
    pub numerator: BiPoly,
    pub denominator: BiPoly,
    /// Transcribed closed form, or `ΔB/B` for custom configurations.
    pub u: RatFn,
    pub constants: Vec<(&'static str, Rational)>,
    pub weights: Vec<Rational>,
    pub c: Rational,
}

impl Instance {
    pub fn name(&self) -> String {
        match self {
            Instance::Rational { params, preset } => {
                preset.map_or_else(|| params.tag().name().to_string(), str::to_string)
            }
            Instance::Tanh(_) => "tanh".into(),
            Instance::Custom(_) => "custom".into(),
        }
    }

    /// Builds a rational instance; `None` for the tanh family.
    pub fn build(&self) -> Result<Option<Built>, CliError> {
        match self {
            Instance::Tanh(_) => Ok(None),
            Instance::Rational { params, .. } => {
                let sol = build(params)?;
                let closed = closed_potential(params)?;
                let (u, constants) = match closed {
                    darboux_core::families::ClosedPotential::Rational { u, constants, .. } => (u, constants),
                    darboux_core::families::ClosedPotential::Tanh(_) => unreachable!("rational params"),
                };
                let c = params.c().cloned().unwrap_or_else(Rational::one);
                Ok(Some(Built {
                    denominator: &sol.m + &BiPoly::constant(c.clone()),
                    b: sol.b,
                    numerator: sol.numerator,
                    u,
                    constants,
                    weights: sol.config.weights.iter().flat_map(|(p, q)| [p.clone(), q.clone()]).collect(),
                    c,
                }))
            }
            Instance::Custom(config) => {
                if config.c <= Rational::zero() {
                    return Err(darboux_core::Error::NonpositiveC.into());
                }
                let (n, m) = pole_sum(config)?;
                let den = &m + &BiPoly::constant(config.c.clone());
                let b = RatFn::new(n.clone(), den.clone())?;
                let u = darboux_core::darboux::potential_from_b(&b)?;
                Ok(Some(Built {
                    b,
                    numerator: n,
                    denominator: den,
                    u,
                    constants: Vec::new(),
                    weights: config.weights.iter().flat_map(|(p, q)| [p.clone(), q.clone()]).collect(),
                    c: config.c.clone(),
                }))
            }
        }
    }
}

/// Reads `--params`: inline JSON if it starts with `{`, otherwise a file path.
pub fn load_params(arg: Option<&str>) -> Result<Option<Map<String, Value>>, CliError> {
    let Some(arg) = arg else { return Ok(None) };
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    match serde_json::from_str::<Value>(&text)? {
        Value::Object(m) => Ok(Some(m)),
        _ => Err(CliError::usage("params must be a JSON object")),
    }
}

/// Resolves `--family` and `--params` into an instance. The family may also
/// come from a `"family"` key in the params.
pub fn resolve(family: Option<&str>, params: Option<&str>) -> Result<Instance, CliError> {
    let mut map = load_params(params)?;
    let from_params = match map.as_mut().and_then(|m| m.remove("family")) {
        Some(Value::String(s)) => Some(s.to_ascii_lowercase()),
        Some(_) => return Err(CliError::usage("`family` must be a string")),
        None => None,
    };
    let family = match (family.map(str::to_ascii_lowercase), from_params) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::usage(format!("--family {a} conflicts with params family {b}")))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(CliError::usage("no family given")),
    };
    instance_for(&family, map.unwrap_or_default())
}

fn instance_for(family: &str, map: Map<String, Value>) -> Result<Instance, CliError> {
    let p = Fields::new(family, map);
    let inst = match family {
        "tsarev-1" | "tsarev-2" => {
            p.allow(&[])?;
            let name = if family == "tsarev-1" { "tsarev-1" } else { "tsarev-2" };
            Instance::Rational {
                params: preset(name).expect("known preset"),
                preset: Some(name),
            }
        }
        "b0" => {
            p.allow(&["p0", "q0", "x0", "y0", "C"])?;
            Instance::Rational {
                params: FamilyParams::B0 {
                    p0: p.rat("p0", 1)?,
                    q0: p.rat("q0", 0)?,
                    x0: p.rat("x0", 0)?,
                    y0: p.rat("y0", 0)?,
                    c: p.rat("C", 1)?,
                },
                preset: None,
            }
        }
        "b1" => {
            p.allow(&["p0", "q0", "x0", "y0", "x1", "y1", "C"])?;
            Instance::Rational {
                params: FamilyParams::B1 {
                    p0: p.rat("p0", 1)?,
                    q0: p.rat("q0", 0)?,
                    x0: p.rat("x0", 0)?,
                    y0: p.rat("y0", 0)?,
                    x1: p.rat_or("x1", rat(-8, 17))?,
                    y1: p.rat_or("y1", rat(-2, 17))?,
                    c: p.rat_or("C", rat(160, 17))?,
                },
                preset: None,
            }
        }
        "b2" => {
            p.allow(&["basis", "weights", "x1", "y1", "x2", "y2", "C"])?;
            let weights = match (p.list("basis")?, p.pairs("weights")?) {
                (Some(_), Some(_)) => return Err(CliError::usage("give either basis or weights, not both")),
                (Some(b), None) => WeightsChoice::Basis(b),
                (None, Some(w)) => WeightsChoice::Weights(w.into_iter().flat_map(|(p, q)| [p, q]).collect()),
                (None, None) => WeightsChoice::Basis(vec![Rational::one(), Rational::zero()]),
            };
            Instance::Rational {
                params: FamilyParams::B2 {
                    weights,
                    x1: p.rat("x1", 1)?,
                    y1: p.rat("y1", 0)?,
                    x2: p.rat("x2", 0)?,
                    y2: p.rat("y2", 1)?,
                    c: p.rat("C", 1)?,
                },
                preset: None,
            }
        }
        "b3" => {
            p.allow(&["p1", "q1", "x1", "y1", "C"])?;
            Instance::Rational {
                params: FamilyParams::B3 {
                    p1: p.rat("p1", 1)?,
                    q1: p.rat("q1", 0)?,
                    x1: p.rat("x1", 1)?,
                    y1: p.rat("y1", 0)?,
                    c: p.rat("C", 1)?,
                },
                preset: None,
            }
        }
        "tanh" => {
            p.allow(&["C1", "C2"])?;
            Instance::Tanh(TanhSolution::new(p.float("C1", 1.0)?, p.float("C2", 0.0)?)?)
        }
        "custom" => {
            p.allow(&["poles", "weights", "C"])?;
            let poles = p.pairs("poles")?.ok_or_else(|| CliError::usage("custom needs `poles`"))?;
            let weights = p.pairs("weights")?.ok_or_else(|| CliError::usage("custom needs `weights`"))?;
            Instance::Custom(PoleConfig::new(poles, weights, p.rat("C", 1)?)?)
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown family `{other}` (expected one of {})",
                FAMILY_NAMES.join(", ")
            )))
        }
    };
    Ok(inst)
}

struct Fields<'a> {
    family: &'a str,
    map: Map<String, Value>,
}

impl<'a> Fields<'a> {
    fn new(family: &'a str, map: Map<String, Value>) -> Self {
        Self { family, map }
    }

    fn allow(&self, keys: &[&str]) -> Result<(), CliError> {
        match self.map.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(CliError::usage(format!("unknown key `{k}` for family {}", self.family))),
            None => Ok(()),
        }
    }

    fn rat(&self, key: &str, default: i64) -> Result<Rational, CliError> {
        self.rat_or(key, rat(default, 1))
    }

    fn rat_or(&self, key: &str, default: Rational) -> Result<Rational, CliError> {
        self.map.get(key).map_or(Ok(default), |v| value_rational(key, v))
    }

    fn float(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.map.get(key) {
            None => Ok(default),
            Some(Value::Number(n)) => n.as_f64().ok_or_else(|| CliError::usage(format!("`{key}` is not a number"))),
            Some(v) => Ok(value_rational(key, v)?.to_f64().unwrap_or(f64::NAN)),
        }
    }

    fn list(&self, key: &str) -> Result<Option<Vec<Rational>>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => a.iter().map(|v| value_rational(key, v)).collect::<Result<_, _>>().map(Some),
            Some(_) => Err(CliError::usage(format!("`{key}` must be an array"))),
        }
    }

    fn pairs(&self, key: &str) -> Result<Option<Vec<(Rational, Rational)>>, CliError> {
        let bad = || CliError::usage(format!("`{key}` must be an array of [a, b] pairs"));
        match self.map.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v.as_array().map(Vec::as_slice) {
                    Some([a, b]) => Ok((value_rational(key, a)?, value_rational(key, b)?)),
                    _ => Err(bad()),
                })
                .collect::<Result<_, _>>()
                .map(Some),
            Some(_) => Err(bad()),
        }
    }
}

fn value_rational(key: &str, v: &Value) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) if n.is_i64() => Ok(rat(n.as_i64().expect("checked"), 1)),
        _ => Err(CliError::usage(format!("`{key}` must be a rational string such as \"3/4\""))),
    }
}

/// Family parameters as `(name, "p/q")` pairs, for reports.
pub fn params_map(p: &FamilyParams) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    let mut put = |k: &str, v: &Rational| out.push((k.to_string(), v.to_string()));
    match p {
        FamilyParams::B0 { p0, q0, x0, y0, c } => {
            put("p0", p0);
            put("q0", q0);
            put("x0", x0);
            put("y0", y0);
            put("C", c);
        }
        FamilyParams::B1 { p0, q0, x0, y0, x1, y1, c } => {
            put("p0", p0);
            put("q0", q0);
            put("x0", x0);
            put("y0", y0);
            put("x1", x1);
            put("y1", y1);
            put("C", c);
        }
        FamilyParams::B2 { weights, x1, y1, x2, y2, c } => {
            let (key, w) = match weights {
                WeightsChoice::Basis(w) => ("basis", w),
                WeightsChoice::Weights(w) => ("weights", w),
            };
            let list = w.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            out.push((key.to_string(), list));
            let mut put = |k: &str, v: &Rational| out.push((k.to_string(), v.to_string()));
            put("x1", x1);
            put("y1", y1);
            put("x2", x2);
            put("y2", y2);
            put("C", c);
        }
        FamilyParams::B3 { p1, q1, x1, y1, c } => {
            put("p1", p1);
            put("q1", q1);
            put("x1", x1);
            put("y1", y1);
            put("C", c);
        }
        FamilyParams::Tanh(t) => {
            out.push(("C1".into(), t.c1.to_string()));
            out.push(("C2".into(), t.c2.to_string()));
        }
    }
    out
}

/// Family tag of a rational family name, if it is one.
pub fn rational_tag(name: &str) -> Option<FamilyTag> {
    match name {
        "b0" => Some(FamilyTag::B0),
        "b1" => Some(FamilyTag::B1),
        "b2" => Some(FamilyTag::B2),
        "b3" => Some(FamilyTag::B3),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let inst = resolve(Some("b0"), Some(r#"{"C": "2/3", "x0": 1}"#)).unwrap();
        let Instance::Rational { params: FamilyParams::B0 { c, x0, p0, .. }, .. } = inst else {
            panic!("expected b0")
        };
        assert_eq!((c, x0, p0), (rat(2, 3), rat(1, 1), rat(1, 1)));
    }

    #[test]
    fn family_from_params() {
        let inst = resolve(None, Some(r#"{"family": "tanh", "C1": "1/2"}"#)).unwrap();
        assert!(matches!(inst, Instance::Tanh(t) if t.c1 == 0.5 && t.c2 == 0.0));
        assert!(resolve(Some("b0"), Some(r#"{"family": "b1"}"#)).is_err());
    }

    #[test]
    fn schema_errors() {
        for (fam, json) in [
            ("b0", r#"{"p": "1"}"#),
            ("b0", r#"{"C": 0.5}"#),
            ("b0", r#"{"C": "1/0"}"#),
            ("tsarev-1", r#"{"C": "1"}"#),
            ("nope", "{}"),
            ("custom", r#"{"poles": [["0","0"]]}"#),
            ("b2", r#"{"basis": ["1","0"], "weights": []}"#),
        ] {
            assert!(resolve(Some(fam), Some(json)).is_err(), "{fam} {json}");
        }
        assert!(resolve(Some("b0"), Some("[1]")).is_err());
    }

    #[test]
    fn custom_config_builds() {
        let inst = resolve(
            Some("custom"),
            Some(r#"{"poles": [["0","0"]], "weights": [["1","0"]], "C": "1"}"#),
        )
        .unwrap();
        let built = inst.build().unwrap().unwrap();
        assert_eq!(built.numerator.to_string(), "x");
        assert_eq!(built.denominator.to_string(), "x^2 + y^2 + 1");
    }
}
