//! The `streament` command line.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bench::config::{Mode, RunConfig, Units};
use crate::bench::params::params_table;
use crate::bench::report::run_report;
use crate::bench::sweep::{run_sweep, write_csv, SweepGrid};
use crate::bench::verify::{run_suite, Suite};
use crate::dist::Family;
use crate::error::Error;
use crate::trial::EstimatorKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "streament",
    version,
    about = "Constant-space streaming entropy estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the parameter table of an estimator.
    Params {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        shared: Shared,
    },
    /// Run seeded trials and write a JSON report.
    Estimate {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        shared: Shared,
    },
    /// Run a property suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Run a grid of configurations and write CSV aggregates.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        estimator: Vec<EstimatorKind>,
        #[command(flatten)]
        shared: Shared,
    },
}

/// A single grid point.
#[derive(Debug, Args)]
pub struct Point {
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_enum)]
    pub estimator: Option<EstimatorKind>,
}

#[derive(Debug, Args)]
pub struct Shared {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// uniform, dirac, zipf:S, geometric:R, two-level:MASS:COUNT or custom:P1,P2,...
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub cn: Option<f64>,
    #[arg(long)]
    pub cr: Option<f64>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Units for printed summaries; reports are always in nats.
    #[arg(long, value_enum, default_value = "nats")]
    pub units: Units,
}

impl Shared {
    fn resolve(&self, point: Option<&Point>) -> crate::error::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(p) = point {
            set(&mut cfg.k, p.k);
            set(&mut cfg.eps, p.eps);
            set(&mut cfg.estimator, p.estimator);
        }
        set(&mut cfg.family, self.family.clone());
        set(&mut cfg.trials, self.trials);
        set(&mut cfg.seed, self.seed);
        set(&mut cfg.mode, self.mode);
        set(&mut cfg.workers, self.workers);
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        let c = &mut cfg.constants;
        set(&mut c.beta, self.beta);
        if self.gamma.is_some() {
            c.gamma = self.gamma;
        }
        set(&mut c.c_n, self.cn);
        set(&mut c.c_r, self.cr);
        set(&mut c.c1, self.c1);
        set(&mut c.c2, self.c2);
        cfg.validate()?;
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapacityExceeded { .. } => EXIT_FAILURE,
        _ => EXIT_CONFIG,
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

enum Failure {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Params { point, shared } => {
            let cfg = shared.resolve(Some(&point))?;
            write!(out, "{}", params_table(&cfg)?)?;
            Ok(EXIT_OK)
        }
        Command::Estimate { point, shared } => {
            let cfg = shared.resolve(Some(&point))?;
            let report = run_report(&cfg)?;
            match &cfg.out {
                Some(path) => {
                    report.write(path)?;
                    let a = &report.aggregates;
                    let u = shared.units;
                    writeln!(
                        out,
                        "{} trials, success rate {}, mean |error| {} {}, true entropy {} {}",
                        report.trials.len(),
                        a.success_rate,
                        a.mean_abs_error.map_or(f64::NAN, |e| u.convert(e)),
                        u.label(),
                        u.convert(report.true_entropy),
                        u.label()
                    )?;
                    writeln!(out, "report written to {}", path.display())?;
                }
                None => writeln!(out, "{}", report.to_json())?,
            }
            Ok(if report.aggregates.failed_trials > 0 {
                EXIT_FAILURE
            } else {
                EXIT_OK
            })
        }
        Command::Verify { suite } => {
            let checks = run_suite(suite)?;
            for c in &checks {
                writeln!(
                    out,
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                )?;
            }
            Ok(if checks.iter().all(|c| c.passed) {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
        Command::Sweep {
            k,
            eps,
            estimator,
            shared,
        } => {
            let base = shared.resolve(None)?;
            let grid = SweepGrid {
                ks: k,
                eps,
                estimators: estimator,
                base: base.clone(),
            };
            let rows = run_sweep(&grid)?;
            match &base.out {
                Some(path) => write_csv(&rows, std::fs::File::create(path)?)?,
                None => write_csv(&rows, &mut *out)?,
            }
            Ok(EXIT_OK)
        }
    }
}
