//! `qevo`: scenario runner for qevo-core.

mod docs;
mod error;
mod run;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{error, info};
use rayon::prelude::*;

use crate::error::{io_error, CliError};
use crate::scenario::{Overrides, Scenario};

#[derive(Debug, Parser)]
#[command(name = "qevo", version, about = "Unitary evolution of qubits and qudits in Gell-Mann coordinates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the generalized Gell-Mann basis for dimension d
    Basis {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bloch coordinates of a matrix document
    Decompose {
        /// matrix document {"dimension": d, "matrix": [[re, im], ...]}
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// exp{-i sqrt(d/2) r.Λ} for a coefficient vector
    Expmap {
        /// JSON array of d^2 - 1 reals
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        vector: Option<String>,
        /// file holding the JSON array
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a scenario and write its trajectory
    Evolve(RunArgs),
    /// Certify the Hamiltonian class of a scenario
    CheckClass(RunArgs),
    /// Integrate a scenario and compare every row with the stepwise oracle
    Validate(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// scenario file; repeat for a batch
    #[arg(long, required = true)]
    config: Vec<PathBuf>,
    /// output file, or output directory for a batch
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    t0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t1: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    oracle_steps: Option<usize>,
    /// scenarios run concurrently in a batch
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum RunKind {
    Evolve,
    CheckClass,
    Validate,
}

fn write_json(out: Option<&Path>, v: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(v).expect("json value serializes");
    text.push('\n');
    run::write_output(out, &text)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn run_one(kind: RunKind, args: &RunArgs, config: &Path, overrides: &Overrides) -> Result<(), CliError> {
    let s = Scenario::load(config, overrides)?;
    let batch = args.config.len() > 1;
    match kind {
        RunKind::CheckClass => {
            let cert = run::check_class(&s)?;
            write_json(run::output_path(args.out.as_deref(), batch, config, &s, "json").as_deref(), &cert)
        }
        RunKind::Evolve | RunKind::Validate => {
            let validate = kind == RunKind::Validate || s.validate;
            let (csv, summary) = run::evolve(&s, validate)?;
            let out = run::output_path(args.out.as_deref(), batch, config, &s, "csv");
            run::write_output(out.as_deref(), &csv)?;
            let line = serde_json::to_string(&summary).expect("summary serializes");
            match (&out, validate) {
                (Some(p), true) => println!("{}: {line}", p.display()),
                (None, true) => eprintln!("{line}"),
                (_, false) => info!("{}: {line}", config.display()),
            }
            if let (Some(p), true) = (&out, batch) {
                info!("wrote {}", p.display());
            }
            Ok(())
        }
    }
}

fn run_batch(kind: RunKind, args: &RunArgs) -> Result<(), CliError> {
    let overrides = Overrides { t0: args.t0, t1: args.t1, step: args.step, oracle_steps: args.oracle_steps };
    if let (true, Some(dir)) = (args.config.len() > 1, &args.out) {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    let results: Vec<Result<(), CliError>> =
        pool.install(|| args.config.par_iter().map(|c| run_one(kind, args, c, &overrides)).collect());
    let mut first = None;
    for (config, r) in args.config.iter().zip(results) {
        if let Err(e) = r {
            if args.config.len() > 1 {
                error!("{}: {e}", config.display());
            }
            first.get_or_insert(e);
        }
    }
    first.map_or(Ok(()), Err)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Basis { dim, out } => write_json(out.as_deref(), &docs::basis(dim)?),
        Command::Decompose { input, dim, out } => {
            write_json(out.as_deref(), &docs::decompose_matrix(&read(&input)?, dim)?)
        }
        Command::Expmap { vector, input, dim, out } => {
            let text = match (vector, input) {
                (Some(v), _) => v,
                (None, Some(p)) => read(&p)?,
                (None, None) => unreachable!("clap requires one of --vector, --input"),
            };
            write_json(out.as_deref(), &docs::expmap(&text, dim)?)
        }
        Command::Evolve(args) => run_batch(RunKind::Evolve, &args),
        Command::CheckClass(args) => run_batch(RunKind::CheckClass, &args),
        Command::Validate(args) => run_batch(RunKind::Validate, &args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QEVO_LOG", "error")).format_timestamp(None).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qevo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
