//! Command-line front end.
//!
//! Exit codes: 0 success, 1 comparison outside tolerance, 2 unreadable or
//! invalid input (including bad flags), 3 numerical failure. Diagnostics go
//! to the error stream; the success stream is written only after a command
//! has fully succeeded (or, for `check`, once the report exists).

pub mod document;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::model::{ContinuousLtiSystem, DiscretizationOptions, DEFAULT_COMPARE_TOLERANCE, DEFAULT_ORACLE_STEPS};
use crate::oracle::{compare, oracle_discretize};
use crate::sim::simulate;
use crate::vanloan::discretize;

use document::{DiscreteDocument, SystemDocument, TrajectoryDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lti-discretize", version, about = "Discretize stochastic continuous-time LTI systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute Ad, Bd, Cd, Md, Qd, Rd with a single matrix exponential.
    Discretize {
        #[command(flatten)]
        common: Common,
        /// Output path (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the matrix-exponential result against RK4 integration.
    Check {
        #[command(flatten)]
        common: Common,
        /// RK4 steps over one sampling period.
        #[arg(long, default_value_t = DEFAULT_ORACLE_STEPS)]
        steps: usize,
        /// Relative tolerance.
        #[arg(long, default_value_t = DEFAULT_COMPARE_TOLERANCE)]
        tol: f64,
    },
    /// Simulate the discretized system.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Number of propagation steps K.
        #[arg(long)]
        samples: usize,
        /// Noise seed; omit for a noise-free run.
        #[arg(long)]
        seed: Option<u64>,
        /// Initial state, comma separated (default: zeros).
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Constant input applied at every step, comma separated (default: zeros).
        #[arg(long, allow_hyphen_values = true)]
        input: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// System document (JSON).
    input_path: PathBuf,
    /// Sampling period.
    #[arg(long, allow_hyphen_values = true)]
    dt: f64,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INPUT },
            message: e.to_string(),
        }
    }
}

/// Runs the CLI with explicit streams and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command) {
        Ok((code, text, path)) => match emit(&text, path.as_deref(), out) {
            Ok(()) => code,
            Err(f) => {
                let _ = writeln!(err, "error: {}", f.message);
                f.code
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display()))),
        None => writeln!(out, "{text}").map_err(|e| Failure::input(format!("cannot write output: {e}"))),
    }
}

type Outcome = (i32, String, Option<PathBuf>);

fn execute(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Discretize { common, out } => {
            let sys = load(&common.input_path)?;
            let opts = options(common.dt)?;
            let d = discretize(&sys, &opts)?;
            Ok((EXIT_OK, DiscreteDocument::from(&d).to_json(), out))
        }
        Command::Check { common, steps, tol } => {
            let sys = load(&common.input_path)?;
            let mut opts = options(common.dt)?;
            opts.oracle_steps = steps;
            opts.compare_tolerance = tol;
            opts.validate()?;
            let method = discretize(&sys, &opts)?;
            let reference = oracle_discretize(&sys, opts.dt, opts.oracle_steps)?;
            let report = compare(&method, &reference, opts.compare_tolerance)?;
            let code = if report.pass && report.passthrough_exact {
                EXIT_OK
            } else {
                EXIT_TOLERANCE
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            Ok((code, text, None))
        }
        Command::Simulate {
            common,
            samples,
            seed,
            x0,
            input,
            out,
        } => {
            let sys = load(&common.input_path)?;
            let opts = options(common.dt)?;
            let x0 = match x0 {
                Some(s) => parse_vector("x0", &s)?,
                None => vec![0.0; sys.state_dim()],
            };
            let u = match input {
                Some(s) => parse_vector("input", &s)?,
                None => vec![0.0; sys.input_dim()],
            };
            let d = discretize(&sys, &opts)?;
            let traj = simulate(&d, &x0, &vec![u; samples], seed)?;
            Ok((EXIT_OK, TrajectoryDocument::from(&traj).to_json(), out))
        }
    }
}

fn options(dt: f64) -> Result<DiscretizationOptions, Failure> {
    let opts = DiscretizationOptions::new(dt);
    opts.validate()?;
    Ok(opts)
}

fn load(path: &Path) -> Result<ContinuousLtiSystem, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let doc = SystemDocument::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let sys = doc
        .to_system()
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    sys.validate()
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(sys)
}

fn parse_vector(name: &str, text: &str) -> Result<Vec<f64>, Failure> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Failure::input(format!("{name}: cannot parse {t:?} as a finite number")))
        })
        .collect()
}
