//! `qclo`: batch tools for question/context lexical overlap.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for data or I/O
//! errors.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CommonFlags, RunConfig, UsageError};

#[derive(Debug, Parser)]
#[command(name = "qclo", version, about = "Question/context lexical overlap toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: CommonFlags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Overlap histogram and mean/median (writes JSON and CSV)
    Stats { dataset: PathBuf },
    /// Split a dataset into Hard and Easy subsets
    Split { dataset: PathBuf },
    /// Rewrite questions with synonyms to lower their overlap
    Augment { dataset: PathBuf },
    /// Shuffle gold and synthetic examples into one dataset
    Merge { gold: PathBuf, synthetic: PathBuf },
    /// EM/F1 per overlap bucket (writes JSON and CSV)
    Eval { dataset: PathBuf, predictions: PathBuf },
    /// BLEU-4 of generated questions per overlap bin (writes JSON and CSV)
    Bleu { dataset: PathBuf, generated: PathBuf },
    /// Sliding-window answer predictions
    Baseline { dataset: PathBuf },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = RunConfig::resolve(cli.flags)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match &cli.command {
        Command::Stats { dataset } => commands::stats(&cfg, dataset),
        Command::Split { dataset } => commands::split(&cfg, dataset),
        Command::Augment { dataset } => commands::augment(&cfg, dataset),
        Command::Merge { gold, synthetic } => commands::merge(&cfg, gold, synthetic),
        Command::Eval { dataset, predictions } => commands::eval(&cfg, dataset, predictions),
        Command::Bleu { dataset, generated } => commands::bleu(&cfg, dataset, generated),
        Command::Baseline { dataset } => commands::baseline(&cfg, dataset),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
