//! `pryce` — verification harness for the helicity position-operator library.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pryce_core::ccwz::{self, PhaseSpacePoint};
use pryce_core::report::{OutputFormat, RunConfig};
use pryce_core::suites::{run_suite, Suite};
use pryce_core::Error;

use crate::output::{RotateReport, StandardCoordsReport};

#[derive(Parser, Debug)]
#[command(name = "pryce", version, about = "Check the helicity-λ position operator identities")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Helicity λ.
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true)]
    lambda: f64,
    /// Sample points per identity.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Tolerance for operator identities.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// RK4 steps.
    #[arg(long, global = true, default_value_t = 10_000)]
    steps: usize,
    /// Guard ε on `1 + κ₃` (and `1 - κ₁²` for gauge checks).
    #[arg(long, global = true, default_value_t = 1e-6)]
    guard: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Leave the timestamp out so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Text => OutputFormat::Text,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Poincare,
    Residuals,
    Pryce,
    Gauge,
    Su2,
    Ccwz,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Poincare => Suite::Poincare,
            SuiteArg::Residuals => Suite::Residuals,
            SuiteArg::Pryce => Suite::Pryce,
            SuiteArg::Gauge => Suite::Gauge,
            SuiteArg::Su2 => Suite::Su2,
            SuiteArg::Ccwz => Suite::Ccwz,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an identity suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
    /// Finite rotation: closed form against RK4.
    Rotate {
        /// Rotation axis; only the first axis has a closed form.
        #[arg(long, default_value_t = 1)]
        axis: u8,
        #[arg(long, allow_hyphen_values = true)]
        angle: f64,
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        p: Vec3,
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "0,0,0")]
        x: Vec3,
    },
    /// Standard coordinates (ξ, ψ) and the linearized variables Y.
    StandardCoords {
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        p: Vec3,
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "0,0,0")]
        x: Vec3,
    },
}

#[derive(Clone, Copy, Debug)]
struct Vec3([f64; 3]);

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got `{s}`"));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part.parse::<f64>().map_err(|e| format!("`{part}`: {e}"))?;
        if !slot.is_finite() {
            return Err(format!("`{part}` is not finite"));
        }
    }
    Ok(Vec3(v))
}

/// Exit codes: 0 everything passed, 1 failed identity or singular input,
/// 2 usage or configuration error.
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn is_usage_error(e: &Error) -> bool {
    matches!(e, Error::InvalidConfig(_) | Error::NonIntegerHelicity(_))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let cfg = RunConfig {
        lambda: c.lambda,
        samples: c.samples,
        seed: c.seed,
        tol: c.tol,
        steps: c.steps,
        guard: c.guard,
        format: c.format.into(),
    };
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let timestamp = (!c.no_timestamp).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });

    let result = match cli.command {
        Command::Verify { suite } => cmd_verify(suite.into(), &cfg, timestamp),
        Command::Rotate { axis, angle, p, x } => cmd_rotate(&cfg, axis, angle, p.0, x.0, timestamp),
        Command::StandardCoords { p, x } => cmd_standard_coords(&cfg, p.0, x.0, timestamp),
    };

    match result {
        Ok((text, passed)) => {
            if let Err(e) = emit(&text, c.output.as_ref()) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(EXIT_FAIL);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if is_usage_error(&e) {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

type CmdResult = Result<(String, bool), Error>;

fn cmd_verify(suite: Suite, cfg: &RunConfig, timestamp: Option<u64>) -> CmdResult {
    let mut report = run_suite(suite, cfg)?;
    report.timestamp = timestamp;
    Ok((output::render_verification(&report, cfg.format), report.passed))
}

fn cmd_rotate(cfg: &RunConfig, axis: u8, angle: f64, p: [f64; 3], x: [f64; 3], timestamp: Option<u64>) -> CmdResult {
    if axis != 1 {
        return Err(Error::InvalidConfig(format!(
            "axis {axis} is not supported; the closed-form rotation is about axis 1"
        )));
    }
    let start = PhaseSpacePoint::new(p, x);
    let closed = ccwz::closed_form_rotation_guarded(&start, cfg.lambda, angle, cfg.guard)?;
    let numeric = ccwz::flow_guarded(ccwz::VectorFieldId::A1, &start, cfg.lambda, angle, cfg.steps, cfg.guard)?;
    let report = RotateReport::new(cfg.clone(), axis, angle, start, closed, numeric, timestamp);
    Ok((output::render_rotate(&report, cfg.format), true))
}

fn cmd_standard_coords(cfg: &RunConfig, p: [f64; 3], x: [f64; 3], timestamp: Option<u64>) -> CmdResult {
    let start = PhaseSpacePoint::new(p, x);
    let sol = ccwz::to_standard_coords_guarded(&start, cfg.lambda, cfg.steps, cfg.guard)?;
    let report = StandardCoordsReport::new(cfg.clone(), start, &sol, timestamp);
    Ok((output::render_standard_coords(&report, cfg.format), true))
}
