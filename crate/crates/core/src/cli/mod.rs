//! Command-line front end.

pub mod report;
pub mod selftest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::brauer_groth::{g0_twisted, g0_untwisted, standard_twist, DeltaFunction};
use crate::error::Error;
use crate::hjfrac::SingularityType;
use crate::resolution::minimal_resolution;
use crate::sodbuilder::{sod_report, PointOrdering};
use crate::toricfan::{validate_fan, wpp_fan, Fan, Ray};

pub use report::Report;

#[derive(Debug, Parser)]
#[command(name = "toricsod", version, about = "Semiorthogonal decomposition data for projective toric surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singular points, class group, Picard rank and Brauer group.
    Analyze(SurfaceArgs),
    /// Minimal resolution: rays, labels and chains.
    Resolve(SurfaceArgs),
    /// Block exceptional collection and the induced decomposition.
    Sod(SurfaceArgs),
    /// Brauer group, the standard class and its reordering relations.
    Brauer(SurfaceArgs),
    /// Grothendieck groups, untwisted and twisted.
    G0(G0Args),
    /// Kalck–Karmazyn algebra of a cyclic quotient singularity.
    Kk(KkArgs),
    /// Rank-one reflexive generators.
    Generators(SurfaceArgs),
    /// Runs the built-in example suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct InputSource {
    /// JSON file with `{"rays": [[x, y], ...]}` or a bare list of rays.
    #[arg(long)]
    pub fan: Option<PathBuf>,
    /// Weights of a weighted projective plane, e.g. `1,2,3`.
    #[arg(long, value_parser = parse_weights)]
    pub weights: Option<[i64; 3]>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    #[command(flatten)]
    pub input: InputSource,
    /// `rotate=k[,reflect]`, `reflect`, `identity` or `smooth-last`.
    #[arg(long, value_parser = parse_order)]
    pub order: Option<OrderSpec>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct G0Args {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// `standard`, `zero`, or one integer per exceptional curve.
    #[arg(long, default_value = "standard")]
    pub twist: String,
}

#[derive(Debug, Clone, Args)]
pub struct KkArgs {
    /// `r,a`.
    #[arg(long = "type", value_parser = parse_pair)]
    pub ty: (i64, i64),
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    /// Replace the relation table of K(7,5) by a wrong one.
    #[arg(long)]
    pub corrupt_kk_table: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderSpec {
    Explicit(PointOrdering),
    SmoothLast,
}

fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

fn parse_weights(s: &str) -> Result<[i64; 3], String> {
    let v = parse_ints(s)?;
    <[i64; 3]>::try_from(v).map_err(|_| "expected three comma-separated weights".to_string())
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    match parse_ints(s)?.as_slice() {
        &[r, a] => Ok((r, a)),
        _ => Err("expected `r,a`".to_string()),
    }
}

fn parse_order(s: &str) -> Result<OrderSpec, String> {
    match s {
        "identity" => return Ok(OrderSpec::Explicit(PointOrdering::identity())),
        "smooth-last" => return Ok(OrderSpec::SmoothLast),
        _ => {}
    }
    let mut o = PointOrdering::identity();
    for part in s.split(',') {
        match part.trim().split_once('=') {
            Some(("rotate", k)) => o.rotate = k.parse().map_err(|e| format!("rotate: {e}"))?,
            None if part.trim() == "reflect" => o.reflect = true,
            _ => return Err(format!("unrecognized ordering component {part:?}")),
        }
    }
    Ok(OrderSpec::Explicit(o))
}

/// Result of one invocation: exit status, the report, and diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub out: Option<PathBuf>,
}

/// A failure that maps to exit status 1.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct DomainError {
    pub kind: &'static str,
    pub message: String,
}

impl From<Error> for DomainError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::TooFewRays(_)
            | Error::NonPrimitiveRay { .. }
            | Error::NonConvexOrClockwise { .. }
            | Error::WrongWinding(_) => "invalid_fan",
            Error::InvalidWeights | Error::NotCoprime => "invalid_weights",
            Error::InvalidType { .. } | Error::SmoothPoint | Error::InvalidDigits => "invalid_type",
            Error::ObstructionPresent => "obstruction",
            Error::InvalidOrdering(_) => "invalid_ordering",
            Error::LengthMismatch { .. } => "invalid_twist",
            _ => "internal",
        };
        DomainError {
            kind,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> DomainError {
    DomainError {
        kind: "input",
        message,
    }
}

/// Parses `{"rays": [[x, y], ...]}` or `[[x, y], ...]`.
pub fn parse_fan_json(text: &str) -> Result<Fan, DomainError> {
    let v: Value = serde_json::from_str(text).map_err(|e| input_error(format!("fan file: {e}")))?;
    let rays = v.get("rays").unwrap_or(&v);
    let rays: Vec<Ray> =
        serde_json::from_value(rays.clone()).map_err(|e| input_error(format!("fan file: {e}")))?;
    Ok(validate_fan(&rays)?)
}

fn load_fan(input: &InputSource) -> Result<Fan, DomainError> {
    match (&input.fan, input.weights) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            parse_fan_json(&text)
        }
        (None, Some(w)) => Ok(wpp_fan(w)?.fan),
        (None, None) => Err(input_error("no input given".to_string())),
    }
}

fn resolve_order(spec: Option<OrderSpec>, f: &Fan) -> Result<PointOrdering, DomainError> {
    match spec {
        None => Ok(PointOrdering::identity()),
        Some(OrderSpec::SmoothLast) => Ok(PointOrdering::smooth_last(f)),
        Some(OrderSpec::Explicit(o)) if o.rotate < f.len() => Ok(o),
        Some(OrderSpec::Explicit(o)) => Err(Error::InvalidOrdering(format!(
            "rotation {} out of range for {} points",
            o.rotate,
            f.len()
        ))
        .into()),
    }
}

fn parse_twist(spec: &str, s: &crate::resolution::ResolvedSurface) -> Result<DeltaFunction, DomainError> {
    match spec {
        "standard" => Ok(standard_twist(s)),
        "zero" => Ok(DeltaFunction::zero(s)),
        list => {
            let coeffs = if list.trim().is_empty() {
                Vec::new()
            } else {
                parse_ints(list).map_err(|e| input_error(format!("twist: {e}")))?
            };
            let expected = s.exceptional_index().len();
            if coeffs.len() != expected {
                return Err(Error::LengthMismatch {
                    expected,
                    found: coeffs.len(),
                }
                .into());
            }
            Ok(DeltaFunction { coeffs })
        }
    }
}

fn dispatch(command: &Command) -> Result<Report, DomainError> {
    match command {
        Command::Analyze(a) => {
            let f = load_fan(&a.input)?;
            let o = resolve_order(a.order, &f)?;
            Ok(report::analyze(&f, o))
        }
        Command::Resolve(a) => {
            let f = load_fan(&a.input)?;
            let o = resolve_order(a.order, &f)?;
            Ok(report::resolve(&f, o))
        }
        Command::Sod(a) => {
            let f = load_fan(&a.input)?;
            let o = resolve_order(a.order, &f)?;
            Ok(report::sod(&sod_report(&f, o)))
        }
        Command::Brauer(a) => {
            let f = load_fan(&a.input)?;
            let o = resolve_order(a.order, &f)?;
            Ok(report::brauer(&sod_report(&f, o)))
        }
        Command::G0(g) => {
            let a = &g.surface;
            let f = load_fan(&a.input)?;
            let o = resolve_order(a.order, &f)?;
            let s = minimal_resolution(&o.apply(&f));
            let b = parse_twist(&g.twist, &s)?;
            Ok(report::g0(&s, &b, &g0_untwisted(&f), &g0_twisted(&s, &b)))
        }
        Command::Kk(k) => {
            let t = SingularityType::new(k.ty.0, k.ty.1)?;
            report::kk(t).map_err(DomainError::from)
        }
        Command::Generators(a) => {
            let f = load_fan(&a.input)?;
            let o = resolve_order(a.order, &f)?;
            report::generators(&f, o).map_err(DomainError::from)
        }
        Command::Selftest(t) => {
            let results = selftest::run_selftest(selftest::Options {
                corrupt_kk_table: t.corrupt_kk_table,
            });
            Ok(selftest::report(&results))
        }
    }
}

fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::Analyze(a)
        | Command::Resolve(a)
        | Command::Sod(a)
        | Command::Brauer(a)
        | Command::Generators(a) => &a.output,
        Command::G0(g) => &g.surface.output,
        Command::Kk(k) => &k.output,
        Command::Selftest(t) => &t.output,
    }
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let output = output_args(&cli.command);
    let (code, stdout, stderr) = match dispatch(&cli.command) {
        Ok(r) => {
            let body = match output.format {
                Format::Json => render_json(&r.json),
                Format::Text => r.text.clone(),
            };
            (i32::from(!r.success), body, String::new())
        }
        Err(e) => {
            let obj = json!({"error": {"kind": e.kind, "message": e.message}});
            match output.format {
                Format::Json => (1, render_json(&obj), String::new()),
                Format::Text => (1, String::new(), format!("error: {}\n", e.message)),
            }
        }
    };
    Outcome {
        code,
        stdout,
        stderr,
        out: output.out.clone(),
    }
}

/// Parses arguments and runs; usage errors exit with status 2.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_cli(&cli),
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (rendered, String::new())
            } else {
                (String::new(), rendered)
            };
            Outcome {
                code,
                stdout,
                stderr,
                out: None,
            }
        }
    }
}
