use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use darboux_cli::grid::{sample, write_samples, Axis, Format};
use darboux_cli::params::{params_map, resolve, Instance};
use darboux_cli::report::{ratfn_json, reports_json, report_json};
use darboux_cli::suite::{instance_checks, run_suite, targets_for, SuiteOptions, DRAWS, MAX_SEED_DEGREE};
use darboux_cli::CliError;
use darboux_core::darboux::{potential_from_b, transform_solution};
use darboux_core::families::FamilyParams;
use darboux_core::harmonic::{z_power, HarmonicPair};
use darboux_core::verify::check_schrodinger;
use darboux_core::BiPoly;
use serde_json::{json, Map, Value};

/// Exactly solvable 2D Schrödinger operators from the nonlocal Darboux transformation.
#[derive(Parser)]
#[command(name = "darboux", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print B, the potential u and derived constants for a family.
    Build(BuildArgs),
    /// Run the certification suite, or the checks for one instance with --params.
    Verify(VerifyArgs),
    /// Transform a harmonic seed and check the new Schrödinger equation.
    Transform(TransformArgs),
    /// Sample u or B on a grid as CSV or JSON.
    Grid(GridArgs),
}

#[derive(Args)]
struct FamilyArgs {
    /// b0, b1, b2, b3, tanh, custom, tsarev-1 or tsarev-2.
    #[arg(long)]
    family: Option<String>,
    /// Parameter JSON, inline or a file path. Rationals as strings, e.g. "3/4".
    #[arg(long)]
    params: Option<String>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Family or preset whose suite targets run; `all` (default) runs everything.
    #[arg(long)]
    family: Option<String>,
    /// Check this instance instead of random draws.
    #[arg(long)]
    params: Option<String>,
    /// Comma-separated suite targets such as `eq12:b0,potential:tsarev-1`.
    #[arg(long, conflicts_with_all = ["family", "params"])]
    targets: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random draws per family.
    #[arg(long, default_value_t = DRAWS)]
    draws: usize,
    /// Highest seed degree for instance checks.
    #[arg(long, default_value_t = MAX_SEED_DEGREE)]
    degree: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedKind {
    /// Y = Re z^k, Q = Im z^k.
    Re,
    /// Y = Im z^k, Q = −Re z^k.
    Im,
    /// Y = 0, Q = 1.
    Const,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum)]
    seed_kind: SeedKind,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    degree: i64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    U,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// x axis as lo:hi:count.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// y axis as lo:hi:count.
    #[arg(long, allow_hyphen_values = true)]
    y: String,
    #[arg(long, value_enum, default_value_t = Field::U)]
    field: Field,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.kind().to_string();
            eprintln!("{}", json!({ "error": "usage", "message": msg, "detail": e.to_string() }));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Ok(v) = std::env::var("DARBOUX_EXP_CAP") {
        let cap: u32 = v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("DARBOUX_EXP_CAP must be a non-negative integer, got `{v}`")))?;
        darboux_core::set_exponent_cap(cap);
    }
    match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Transform(a) => cmd_transform(a),
        Command::Grid(a) => cmd_grid(a),
    }
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(path: Option<&PathBuf>, v: &Value) -> Result<(), CliError> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn object(pairs: Vec<(String, String)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k, Value::String(v))).collect::<Map<_, _>>())
}

fn instance_params(inst: &Instance) -> Value {
    match inst {
        Instance::Rational { params, .. } => object(params_map(params)),
        Instance::Tanh(t) => object(params_map(&FamilyParams::Tanh(*t))),
        Instance::Custom(c) => {
            let pairs = |v: &[(darboux_core::Rational, darboux_core::Rational)]| -> Value {
                v.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect()
            };
            json!({ "poles": pairs(&c.poles), "weights": pairs(&c.weights), "C": c.c.to_string() })
        }
    }
}

fn cmd_build(a: BuildArgs) -> Result<u8, CliError> {
    let inst = resolve(a.family.family.as_deref(), a.family.params.as_deref())?;
    let preset = match &inst {
        Instance::Rational { preset, .. } => *preset,
        _ => None,
    };
    let mut out = json!({
        "family": inst.name(),
        "preset": preset,
        "params": instance_params(&inst),
    });
    match (&inst, inst.build()?) {
        (Instance::Tanh(t), _) => out["formula"] = json!(t.formula()),
        (_, Some(built)) => {
            out["B"] = ratfn_json(&built.b);
            out["u"] = ratfn_json(&built.u);
            out["numerator"] = json!(built.numerator.to_string());
            out["denominator"] = json!(built.denominator.to_string());
            out["weights"] = built.weights.iter().map(ToString::to_string).collect();
            out["constants"] = Value::Object(
                built.constants.iter().map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect(),
            );
        }
        (_, None) => unreachable!("only tanh lacks a rational build"),
    }
    emit(a.out.as_ref(), &out)?;
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, CliError> {
    let reports = if let Some(t) = &a.targets {
        let targets: Vec<String> = t.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        run_suite(&targets, SuiteOptions { seed: a.seed, draws: a.draws })?
    } else if a.params.is_some() {
        let inst = resolve(a.family.as_deref(), a.params.as_deref())?;
        instance_checks(&inst, a.seed, a.degree)?
    } else {
        let targets = targets_for(a.family.as_deref().unwrap_or("all"))?;
        run_suite(&targets, SuiteOptions { seed: a.seed, draws: a.draws })?
    };
    emit(a.out.as_ref(), &reports_json(&reports))?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    eprintln!("{}", json!({ "reports": reports.len(), "failed": failed }));
    Ok(if failed == 0 { 0 } else { EXIT_FAIL })
}

fn seed_pair(kind: SeedKind, degree: i64) -> Result<HarmonicPair, CliError> {
    let k = u32::try_from(degree)
        .map_err(|_| CliError::usage(format!("--degree must be a non-negative integer, got {degree}")))?;
    Ok(match kind {
        SeedKind::Const => HarmonicPair::new(BiPoly::zero(), BiPoly::one())?,
        SeedKind::Re => {
            let (re, im) = z_power(k);
            HarmonicPair::new(re, im)?
        }
        SeedKind::Im => {
            let (re, im) = z_power(k);
            HarmonicPair::new(im, -&re)?
        }
    })
}

fn cmd_transform(a: TransformArgs) -> Result<u8, CliError> {
    let seed = seed_pair(a.seed_kind, a.degree)?;
    let inst = resolve(a.family.family.as_deref(), a.family.params.as_deref())?;
    let Some(built) = inst.build()? else {
        return Err(CliError::usage("transform needs a rational family"));
    };
    let t = transform_solution(&built.b, &seed)?;
    let report = check_schrodinger(&t.y_tilde, &potential_from_b(&built.b)?)?;
    let kind = match a.seed_kind {
        SeedKind::Re => "re",
        SeedKind::Im => "im",
        SeedKind::Const => "const",
    };
    let out = json!({
        "family": inst.name(),
        "params": instance_params(&inst),
        "seed": { "kind": kind, "degree": a.degree, "Y": seed.y.to_string(), "Q": seed.q.to_string() },
        "Y_tilde": ratfn_json(&t.y_tilde),
        "check": report_json(&report),
    });
    emit(a.out.as_ref(), &out)?;
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

fn cmd_grid(a: GridArgs) -> Result<u8, CliError> {
    let xs = Axis::parse(&a.x)?;
    let ys = Axis::parse(&a.y)?;
    let inst = resolve(a.family.family.as_deref(), a.family.params.as_deref())?;
    let f: Box<dyn Fn(f64, f64) -> f64> = match (&inst, inst.build()?) {
        (Instance::Tanh(t), _) => {
            let t = *t;
            match a.field {
                Field::U => Box::new(move |x, y| t.u(x, y)),
                Field::B => Box::new(move |x, y| t.b(x, y)),
            }
        }
        (_, Some(built)) => {
            let c = match a.field {
                Field::U => built.u.compile(),
                Field::B => built.b.compile(),
            };
            Box::new(move |x, y| c.eval(x, y))
        }
        (_, None) => unreachable!("only tanh lacks a rational build"),
    };
    let rows = sample(&*f, &xs, &ys);
    let format = match a.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    let mut w = output(a.out.as_ref())?;
    let non_finite = write_samples(&rows, format, &mut *w)?;
    w.flush()?;
    eprintln!("{}", json!({ "rows": rows.len(), "non_finite": non_finite }));
    Ok(0)
}
