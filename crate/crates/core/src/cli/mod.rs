//! Command-line surface: `boundary`, `bounds`, `sample` and `verify`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid parameters or usage,
//! 3 quadrature or continuation failure, 4 sampled values outside the
//! region, 5 a failed invariant in `verify`.

mod output;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::{check_tangency, path_bound_detailed, GContext, TangencyReport};
use crate::params::{validate_params, ClassParams, EvalPoint, Warning};
use crate::presets::{find, PRESETS};
use crate::quadrature::PathSpec;
use crate::region::{boundary_curve, contains, is_convex, is_simple, Containment, CONVEXITY_TOL};
use crate::samplers::{sample_log_f, MAX_DEGREE};
use crate::verify::{run_suite_with, SuiteConfig, VerifyReport};
use crate::{Error, DEFAULT_TOL};

pub use output::{boundary_csv, boundary_svg, sample_csv};

/// Environment variable overriding the default quadrature tolerance.
pub const TOL_ENV: &str = "VARREG_TOL";

/// Band, relative to the region diameter, inside which sampled values count
/// as boundary points.
pub const SAMPLE_BAND: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "varreg",
    version,
    about = "Regions of variability for log f(z0)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace the boundary curve of the region.
    Boundary(BoundaryArgs),
    /// Disk bound for the region from a path integral.
    Bounds(BoundsArgs),
    /// Sample class members and classify their log f(z0).
    Sample(SampleArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Named parameter preset (1L ... 6R), or `all` for verify.
    #[arg(long, conflicts_with_all = ["z0", "lambda", "mu"])]
    pub preset: Option<String>,
    /// Evaluation point as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires_all = ["lambda", "mu"])]
    pub z0: Option<Complex64>,
    /// Second-coefficient parameter as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: Option<Complex64>,
    /// Class exponent as RE,IM, with positive real part.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub mu: Option<Complex64>,
    /// Absolute quadrature tolerance (overrides VARREG_TOL).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Number of boundary samples.
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    /// CSV output; a JSON sidecar is written next to it as PATH.json.
    /// Without it the CSV goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG plot of the curve.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PathChoice {
    Radial,
    Gamma0,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t = PathChoice::Radial)]
    pub path: PathChoice,
    /// Boundary angle selecting the extremal path.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// JSON output; stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub max_degree: usize,
    /// Boundary samples of the reference polygon.
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    /// CSV output with a JSON summary at PATH.json; without it the CSV goes
    /// to stdout and the summary to stderr.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Smaller sample counts.
    #[arg(long)]
    pub quick: bool,
    /// Boundary samples; the refinement check compares against half as many.
    #[arg(long)]
    pub samples: Option<usize>,
    /// JSON report; the table always goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("{re:?}: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("{im:?}: {e}"))?;
    Ok(Complex64::new(re, im))
}

/// A failed invocation with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::new(if e.is_numerical() { 3 } else { 2 }, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::new(1, e.to_string())
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

/// Tolerance from the flag, else from `env`, else the default.
pub fn resolve_tol(flag: Option<f64>, env: Option<&str>) -> CliResult<f64> {
    let tol = match (flag, env) {
        (Some(t), _) => t,
        (None, Some(s)) => s
            .trim()
            .parse::<f64>()
            .map_err(|e| CliError::new(2, format!("{TOL_ENV}={s:?}: {e}")))?,
        (None, None) => DEFAULT_TOL,
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol).into());
    }
    Ok(tol)
}

/// Parameters after preset lookup and validation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub preset: Option<String>,
    pub params: ClassParams,
    pub z0: EvalPoint,
    pub tol: f64,
    pub warnings: Vec<Warning>,
}

fn resolve(args: &ParamArgs, env_tol: Option<&str>) -> CliResult<Vec<Resolved>> {
    let tol = resolve_tol(args.tol, env_tol)?;
    let triples: Vec<(Option<String>, ClassParams, EvalPoint)> =
        match (&args.preset, args.z0, args.lambda, args.mu) {
            (Some(id), ..) if id.eq_ignore_ascii_case("all") => PRESETS
                .iter()
                .map(|p| (Some(p.id.to_string()), p.params(), p.eval_point()))
                .collect(),
            (Some(id), ..) => {
                let p =
                    find(id).ok_or_else(|| CliError::new(2, format!("unknown preset {id:?}")))?;
                vec![(Some(p.id.to_string()), p.params(), p.eval_point())]
            }
            (None, Some(z0), Some(lambda), Some(mu)) => {
                vec![(None, ClassParams::new(mu, lambda), EvalPoint::new(z0))]
            }
            _ => {
                return Err(CliError::new(
                    2,
                    "give --preset or all of --z0, --lambda, --mu",
                ))
            }
        };
    triples
        .into_iter()
        .map(|(preset, params, z0)| {
            let v = validate_params(params, z0)?;
            Ok(Resolved {
                preset,
                params: v.params,
                z0: v.z0,
                tol,
                warnings: v.warnings,
            })
        })
        .collect()
}

fn resolve_one(args: &ParamArgs, env_tol: Option<&str>) -> CliResult<Resolved> {
    let mut all = resolve(args, env_tol)?;
    if all.len() != 1 {
        return Err(CliError::new(2, "--preset all is only accepted by verify"));
    }
    Ok(all.remove(0))
}

/// Streams written by a command.
pub struct Io<'a> {
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

fn warn(io: &mut Io<'_>, r: &Resolved) -> CliResult {
    for w in &r.warnings {
        writeln!(io.stderr, "warning: {w}")?;
    }
    Ok(())
}

fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn sidecar(path: &std::path::Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

#[derive(Debug, Serialize)]
struct BoundaryMeta<'a> {
    #[serde(flatten)]
    input: &'a Resolved,
    samples: usize,
    rows: usize,
    singleton: bool,
    err_bound: f64,
    convex: Option<bool>,
    convexity_violation: Option<f64>,
    simple: Option<bool>,
    diameter: f64,
    centroid: Complex64,
}

fn cmd_boundary(args: &BoundaryArgs, env_tol: Option<&str>, io: &mut Io<'_>) -> CliResult {
    let r = resolve_one(&args.params, env_tol)?;
    warn(io, &r)?;
    let curve = boundary_curve(r.params, r.z0, args.samples, r.tol)?;
    let poly = curve.polygon();
    let (convex, violation, simple) = if curve.singleton {
        (None, None, None)
    } else {
        let c = is_convex(&poly, CONVEXITY_TOL)?;
        (
            Some(c.convex),
            Some(c.worst_violation),
            Some(is_simple(&poly)?),
        )
    };
    let meta = BoundaryMeta {
        input: &r,
        samples: args.samples,
        rows: curve.samples.len(),
        singleton: curve.singleton,
        err_bound: curve.err_bound,
        convex,
        convexity_violation: violation,
        simple,
        diameter: poly.diameter(),
        centroid: poly.centroid(),
    };
    let csv = boundary_csv(&curve);
    match &args.out {
        Some(path) => {
            std::fs::write(path, csv)?;
            std::fs::write(sidecar(path), json_string(&meta))?;
        }
        None => io.stdout.write_all(csv.as_bytes())?,
    }
    if let Some(svg) = &args.svg {
        std::fs::write(svg, boundary_svg(&curve))?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct BoundsReport<'a> {
    #[serde(flatten)]
    input: &'a Resolved,
    path: PathChoice,
    theta: Option<f64>,
    center: Complex64,
    radius: f64,
    center_err: f64,
    radius_err: f64,
    tangency: Option<TangencyReport>,
}

fn cmd_bounds(args: &BoundsArgs, env_tol: Option<&str>, io: &mut Io<'_>) -> CliResult {
    let r = resolve_one(&args.params, env_tol)?;
    warn(io, &r)?;
    let report = match args.path {
        PathChoice::Radial => {
            let b = path_bound_detailed(&r.params, &PathSpec::radial(r.z0.z0, 2)?, r.tol)?;
            BoundsReport {
                input: &r,
                path: args.path,
                theta: None,
                center: b.disk.center,
                radius: b.disk.radius,
                center_err: b.center_err,
                radius_err: b.radius_err,
                tangency: None,
            }
        }
        PathChoice::Gamma0 => {
            let ctx = GContext::new(r.params, args.theta);
            let gamma = crate::bounds::trace_gamma0(&ctx, r.z0, crate::bounds::GAMMA0_NODES)?;
            let b = path_bound_detailed(&r.params, &gamma.path, r.tol)?;
            let t = check_tangency(&ctx, r.z0, r.tol)?;
            BoundsReport {
                input: &r,
                path: args.path,
                theta: Some(args.theta),
                center: b.disk.center,
                radius: b.disk.radius,
                center_err: b.center_err,
                radius_err: b.radius_err,
                tangency: Some(t),
            }
        }
    };
    let text = json_string(&report);
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => io.stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Classification of one sampled value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub index: usize,
    pub seed: u64,
    pub degree: usize,
    pub value: Complex64,
    pub verdict: Containment,
}

#[derive(Debug, Serialize)]
struct SampleSummary<'a> {
    #[serde(flatten)]
    input: &'a Resolved,
    count: usize,
    seed: u64,
    max_degree: usize,
    samples: usize,
    band: f64,
    inside: usize,
    boundary: usize,
    outside: usize,
}

fn cmd_sample(args: &SampleArgs, env_tol: Option<&str>, io: &mut Io<'_>) -> CliResult {
    let r = resolve_one(&args.params, env_tol)?;
    warn(io, &r)?;
    if args.max_degree > MAX_DEGREE || args.max_degree == 0 {
        return Err(CliError::new(
            2,
            format!("--max-degree must be in 1..={MAX_DEGREE}"),
        ));
    }
    let curve = boundary_curve(r.params, r.z0, args.samples, r.tol)?;
    let values = sample_log_f(
        r.params,
        r.z0,
        args.count,
        args.seed,
        args.max_degree,
        r.tol,
    )?;
    let poly = curve.polygon();
    let rows = values
        .into_iter()
        .map(|v| {
            let verdict = if curve.singleton {
                let w = poly.vertices[0];
                if (v.value - w).norm() <= SAMPLE_BAND * (1.0 + w.norm()) {
                    Containment::Boundary
                } else {
                    Containment::Outside
                }
            } else {
                contains(&poly, v.value, SAMPLE_BAND)?
            };
            Ok(SampleRow {
                index: v.index,
                seed: v.seed,
                degree: v.degree,
                value: v.value,
                verdict,
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let tally = |c: Containment| rows.iter().filter(|r| r.verdict == c).count();
    let summary = SampleSummary {
        input: &r,
        count: args.count,
        seed: args.seed,
        max_degree: args.max_degree,
        samples: args.samples,
        band: SAMPLE_BAND,
        inside: tally(Containment::Inside),
        boundary: tally(Containment::Boundary),
        outside: tally(Containment::Outside),
    };
    let csv = sample_csv(&rows);
    let json = json_string(&summary);
    match &args.out {
        Some(path) => {
            std::fs::write(path, csv)?;
            std::fs::write(sidecar(path), json)?;
        }
        None => {
            io.stdout.write_all(csv.as_bytes())?;
            io.stderr.write_all(json.as_bytes())?;
        }
    }
    if summary.outside > 0 {
        return Err(CliError::new(
            4,
            format!("{} sampled values outside the region", summary.outside),
        ));
    }
    Ok(())
}

fn verify_table(report: &VerifyReport) -> String {
    let mut s = format!(
        "{} (z0 = {:.6}, tol = {:e})\n",
        report.label, report.z0.z0, report.tol
    );
    for c in &report.checks {
        s.push_str(&format!(
            "  {:<24} {:<4} {:>12.3e} / {:<9.1e} {}\n",
            c.name,
            if c.passed { "ok" } else { "FAIL" },
            c.value,
            c.threshold,
            c.detail
        ));
    }
    s
}

fn cmd_verify(args: &VerifyArgs, env_tol: Option<&str>, io: &mut Io<'_>) -> CliResult {
    let inputs = resolve(&args.params, env_tol)?;
    let mut reports = Vec::with_capacity(inputs.len());
    for r in &inputs {
        warn(io, r)?;
        let label = r.preset.clone().unwrap_or_else(|| "custom".to_string());
        let mut config = if args.quick {
            SuiteConfig::quick()
        } else {
            SuiteConfig::full()
        };
        if let Some(n) = args.samples {
            config.samples = n;
            config.coarse_samples = n / 2;
        }
        let report = run_suite_with(&label, r.params, r.z0, r.tol, args.quick, &config);
        io.stdout.write_all(verify_table(&report).as_bytes())?;
        reports.push(report);
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    writeln!(io.stdout, "{passed}/{} passed", reports.len())?;
    if let Some(path) = &args.out {
        std::fs::write(path, json_string(&reports))?;
    }
    match reports
        .iter()
        .find_map(|r| r.first_failure().map(|c| (r, c)))
    {
        Some((r, c)) => Err(CliError::new(
            5,
            format!("{}: invariant {} failed: {}", r.label, c.name, c.detail),
        )),
        None => Ok(()),
    }
}

/// Runs a parsed command.
pub fn execute(cli: &Cli, env_tol: Option<&str>, io: &mut Io<'_>) -> CliResult {
    match &cli.command {
        Command::Boundary(a) => cmd_boundary(a, env_tol, io),
        Command::Bounds(a) => cmd_bounds(a, env_tol, io),
        Command::Sample(a) => cmd_sample(a, env_tol, io),
        Command::Verify(a) => cmd_verify(a, env_tol, io),
    }
}

/// Parses `args` and runs the command, reporting errors on `io.stderr`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, env_tol: Option<&str>, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(io.stderr, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, env_tol, io) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(
            parse_complex("-0.5,2e-3").unwrap(),
            Complex64::new(-0.5, 2e-3)
        );
        assert_eq!(
            parse_complex(" 1 , -1 ").unwrap(),
            Complex64::new(1.0, -1.0)
        );
        assert!(parse_complex("1").is_err());
        assert!(parse_complex("a,1").is_err());
    }

    #[test]
    fn tolerance_precedence() {
        assert_eq!(resolve_tol(None, None).unwrap(), DEFAULT_TOL);
        assert_eq!(resolve_tol(None, Some("1e-8")).unwrap(), 1e-8);
        assert_eq!(resolve_tol(Some(1e-6), Some("1e-8")).unwrap(), 1e-6);
        assert_eq!(resolve_tol(None, Some("x")).unwrap_err().code, 2);
        assert_eq!(resolve_tol(Some(0.0), None).unwrap_err().code, 2);
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::BranchAmbiguity("x".into())).code, 3);
        assert_eq!(
            CliError::from(Error::InvalidMu { re: -1.0, im: 0.0 }).code,
            2
        );
    }
}
