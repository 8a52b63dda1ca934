//! `sbdd`: batch front-end over `sbdd-core`.
//!
//! Exit status is 0 on success, 1 when any job or the command itself failed,
//! and 2 on usage errors (bad flags, config or parameter values).

mod analyze;
mod config;
mod inputs;
mod output;
mod refine;
mod score;
mod signals;
mod structure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::FileConfig;

/// Invalid flags, config keys or parameter values.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Number of failed jobs in a batch command.
#[derive(Debug, Default, Clone, Copy)]
pub struct Outcome {
    pub failures: usize,
}

#[derive(Debug, Parser)]
#[command(
    name = "sbdd",
    version,
    about = "Structure-based ligand design toolkit"
)]
struct Cli {
    /// TOML config; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for stochastic choices.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rigid-body L-BFGS refinement of ligand poses.
    Refine(refine::RefineArgs),
    /// Contact-energy breakdown of a ligand pose.
    Score(score::ScoreArgs),
    /// Scaffold, side chain, ring systems and linkers of a ligand.
    Decompose(structure::DecomposeArgs),
    /// Target/context partition for a generation task.
    Mask(structure::MaskArgs),
    /// Context summaries per complex and corpus information density.
    Analyze(analyze::AnalyzeArgs),
    /// Windowed gradient signal-to-noise ratios.
    Gsnr(signals::GsnrArgs),
    /// Diffusion variance schedule table.
    Schedule(signals::ScheduleArgs),
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let seed = cli.seed.or(file.seed).unwrap_or(0);
    match cli.command {
        Command::Refine(a) => refine::run(a, &file),
        Command::Score(a) => score::run(a, &file),
        Command::Decompose(a) => structure::run_decompose(a),
        Command::Mask(a) => structure::run_mask(a, seed),
        Command::Analyze(a) => analyze::run(a, &file),
        Command::Gsnr(a) => signals::run_gsnr(a, &file),
        Command::Schedule(a) => signals::run_schedule(a, &file),
    }
}

/// A closed stdout (e.g. `| head`) ends the command quietly.
fn broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(o) if o.failures == 0 => ExitCode::SUCCESS,
        Ok(o) => {
            eprintln!("error: {} job(s) failed", o.failures);
            ExitCode::from(1)
        }
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<UsageError>().is_some() => {
            eprintln!("error: {e:#}");
            eprintln!("run with --help for usage");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
