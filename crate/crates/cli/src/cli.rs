//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use qwrca::qw::Chirality;
use qwrca::{InitialTriple, Qubit};

use crate::config::{read_json, CoinSpec, Format, Initial, Mode, RunConfig, SweepConfig};
use crate::error::{CliError, CliResult};
use crate::output;
use crate::run::{self, Outcome};
use crate::sweep;

#[derive(Parser, Debug)]
#[command(
    name = "qwrca",
    version,
    about = "Quantum walk / reversible cellular automaton simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Walk distributions and chirality norms per step.
    Qw(RunArgs),
    /// Automaton rows, squared norm and first moment per step.
    Rca(RunArgs),
    /// Class membership, residuals and simulated checks for a triple.
    Classify(RunArgs),
    /// Squared norm by direct sum, Parseval and the exact formula.
    Norms(RunArgs),
    /// Large-time limits of the chirality norms and of the squared norm.
    Limits(RunArgs),
    /// Run the full property suite; exits 1 on any failure.
    Verify(RunArgs),
    /// Run one mode over every (theta, initial state) pair.
    Sweep(SweepArgs),
}

fn chirality(s: &str) -> Result<Chirality, String> {
    match s {
        "left" | "l" => Ok(Chirality::Left),
        "right" | "r" => Ok(Chirality::Right),
        _ => Err(format!("expected left or right, got {s:?}")),
    }
}

/// Comma-separated list of floats given as one argument.
#[derive(Clone, Debug)]
struct Numbers(Vec<f64>);

fn numbers(s: &str) -> Result<Numbers, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Numbers)
}

fn complexes(v: &[f64], want: usize, what: &str) -> CliResult<Vec<Complex64>> {
    if v.len() != 2 * want {
        return Err(CliError::config(format!(
            "{what} needs {} comma-separated numbers (re,im pairs), got {}",
            2 * want,
            v.len()
        )));
    }
    Ok(v.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

fn qubit_of(Numbers(v): &Numbers) -> CliResult<Initial> {
    let z = complexes(v, 2, "--qubit")?;
    Ok(Initial::Qubit(Qubit::new(z[0], z[1])?))
}

fn triple_of(Numbers(v): &Numbers) -> CliResult<Initial> {
    let z = complexes(v, 3, "--triple")?;
    Ok(Initial::Triple(InitialTriple::new(z[0], z[1], z[2])?))
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Coin angle in radians.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Coin angle as a fraction of pi, e.g. 1/4.
    #[arg(long)]
    theta_frac: Option<String>,
    /// Qubit as re,im,re,im.
    #[arg(long, value_parser = numbers, allow_hyphen_values = true, conflicts_with = "triple")]
    qubit: Option<Numbers>,
    /// Triple as re,im,re,im,re,im.
    #[arg(long, value_parser = numbers, allow_hyphen_values = true)]
    triple: Option<Numbers>,
    /// Chirality used to convert a qubit into a triple.
    #[arg(long, value_parser = chirality)]
    chirality: Option<Chirality>,
    /// Explicit coin a,b,c,d as eight numbers (re,im pairs).
    #[arg(long, value_parser = numbers, allow_hyphen_values = true)]
    coin: Option<Numbers>,
    #[arg(long)]
    steps: Option<usize>,
    /// Conserved constant for classify (defaults to |alpha|^2).
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Reduced verify suite.
    #[arg(long)]
    quick: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn overrides(&self, mode: Mode) -> CliResult<RunConfig> {
        let initial = match (&self.qubit, &self.triple) {
            (Some(q), _) => Some(qubit_of(q)?),
            (None, Some(t)) => Some(triple_of(t)?),
            (None, None) => None,
        };
        let coin = match &self.coin {
            Some(Numbers(v)) => {
                let z = complexes(v, 4, "--coin")?;
                Some(CoinSpec {
                    a: z[0],
                    b: z[1],
                    c: z[2],
                    d: z[3],
                })
            }
            None => None,
        };
        Ok(RunConfig {
            mode: Some(mode),
            theta: self.theta,
            theta_frac: self.theta_frac.clone(),
            coin,
            initial,
            chirality: self.chirality,
            steps: self.steps,
            c: self.c,
            seed: self.seed,
            quick: self.quick.then_some(true),
            output_path: self.out.clone(),
            format: self.format,
        })
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// JSON sweep configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Comma-separated angles in radians.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    thetas: Vec<f64>,
    /// Comma-separated fractions of pi, e.g. 1/6,1/4,1/3.
    #[arg(long, value_delimiter = ',')]
    theta_fracs: Vec<String>,
    /// Qubit as re,im,re,im; repeatable.
    #[arg(long, value_parser = numbers, allow_hyphen_values = true)]
    qubit: Vec<Numbers>,
    /// Triple as re,im,re,im,re,im; repeatable.
    #[arg(long, value_parser = numbers, allow_hyphen_values = true)]
    triple: Vec<Numbers>,
    #[arg(long, value_parser = chirality)]
    chirality: Option<Chirality>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepArgs {
    fn overrides(&self) -> CliResult<SweepConfig> {
        let mut initials = Vec::new();
        for q in &self.qubit {
            initials.push(qubit_of(q)?);
        }
        for t in &self.triple {
            initials.push(triple_of(t)?);
        }
        Ok(SweepConfig {
            mode: self.mode,
            thetas: self.thetas.clone(),
            theta_fracs: self.theta_fracs.clone(),
            initials,
            chirality: self.chirality,
            steps: self.steps,
            c: self.c,
            output_path: self.out.clone(),
            format: self.format,
        })
    }
}

fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                CliError::Failed(format!("{}: {e}", p.display()))
            })?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

/// Loads, validates and runs one configuration, writing its output.
pub fn execute_run(cfg: &RunConfig) -> CliResult<()> {
    let job = cfg.job()?;
    let outcome = run::run_job(&job)?;
    let mut out = sink(cfg.output_path.as_deref())?;
    output::write_outcome(&mut out, &outcome, cfg.format())?;
    out.flush()?;
    match outcome {
        Outcome::Verify(v) if !v.passed => {
            let failed: Vec<&str> = v
                .suites
                .iter()
                .filter(|s| !s.passed)
                .map(|s| s.name)
                .collect();
            Err(CliError::Failed(format!(
                "verification failed: {}",
                failed.join(", ")
            )))
        }
        _ => Ok(()),
    }
}

pub fn execute_sweep(cfg: &SweepConfig) -> CliResult<()> {
    let report = sweep::run_sweep(cfg)?;
    let mut out = sink(cfg.output_path.as_deref())?;
    sweep::write_sweep(&mut out, &report, cfg.format())?;
    out.flush()?;
    if report.passed {
        Ok(())
    } else {
        let failed = report
            .cells
            .iter()
            .filter(|c| matches!(c.result, sweep::CellResult::Error(_)))
            .count();
        Err(CliError::Failed(format!(
            "{failed} of {} sweep cells failed",
            report.cells.len()
        )))
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let (mode, args) = match cli.command {
        Command::Sweep(args) => {
            let base = match &args.config {
                Some(p) => read_json::<SweepConfig>(p)?,
                None => SweepConfig::default(),
            };
            return execute_sweep(&base.merged(args.overrides()?));
        }
        Command::Qw(a) => (Mode::Qw, a),
        Command::Rca(a) => (Mode::Rca, a),
        Command::Classify(a) => (Mode::Classify, a),
        Command::Norms(a) => (Mode::Norms, a),
        Command::Limits(a) => (Mode::Limits, a),
        Command::Verify(a) => (Mode::Verify, a),
    };
    let base = match &args.config {
        Some(p) => read_json::<RunConfig>(p)?,
        None => RunConfig::default(),
    };
    if let Some(m) = base.mode {
        if m != mode {
            return Err(CliError::config(format!(
                "config file is for mode {}, not {}",
                m.name(),
                mode.name()
            )));
        }
    }
    execute_run(&base.merged(args.overrides(mode)?))
}

/// Entry point; returns the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qwrca: {e}");
            e.exit_code()
        }
    }
}
