use std::path::{Path, PathBuf};

use anyhow::Context as _;
use clap::Args;
use qclo_core::baseline::BaselineParams;
use qclo_core::overlap::{DEFAULT_BIN_WIDTH, DEFAULT_THRESHOLD};
use serde::Deserialize;

pub const DEFAULT_SEED: u64 = 42;

/// A failure caused by how the tool was invoked rather than by the data.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Flags shared by every subcommand. Unset flags fall back to `--config`,
/// then to the built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonFlags {
    /// JSON file whose keys mirror the long flag names (with underscores)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Overlap ratio at or below which a question is Hard [default: 0.3]
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    /// Histogram bin width; 1/width must be an integer [default: 0.1]
    #[arg(long, global = true)]
    pub bin_width: Option<f64>,
    /// Seed for synonym choice and shuffling [default: 42]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Synonym lexicon, one JSON object per line
    #[arg(long, global = true, value_name = "FILE")]
    pub lexicon: Option<PathBuf>,
    /// Stopword list replacing the built-in one
    #[arg(long, global = true, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,
    /// Output file
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Output file for Hard examples (split)
    #[arg(long, global = true, value_name = "FILE")]
    pub out_hard: Option<PathBuf>,
    /// Output file for Easy examples (split)
    #[arg(long, global = true, value_name = "FILE")]
    pub out_easy: Option<PathBuf>,
    /// Score only the examples that have a prediction
    #[arg(long, global = true)]
    pub skip_missing: bool,
    /// Worker threads; output does not depend on this
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Longest answer span the baseline considers [default: 4]
    #[arg(long, global = true)]
    pub max_span_len: Option<usize>,
    /// Tokens on each side of a span the baseline inspects [default: 10]
    #[arg(long, global = true)]
    pub window: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    threshold: Option<f64>,
    bin_width: Option<f64>,
    seed: Option<u64>,
    lexicon: Option<PathBuf>,
    stopwords: Option<PathBuf>,
    out: Option<PathBuf>,
    out_hard: Option<PathBuf>,
    out_easy: Option<PathBuf>,
    skip_missing: Option<bool>,
    threads: Option<usize>,
    max_span_len: Option<usize>,
    window: Option<usize>,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub threshold: f64,
    pub bin_width: f64,
    pub seed: u64,
    pub lexicon: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub out_hard: Option<PathBuf>,
    pub out_easy: Option<PathBuf>,
    pub skip_missing: bool,
    pub threads: Option<usize>,
    pub baseline: BaselineParams,
}

impl RunConfig {
    pub fn resolve(flags: CommonFlags) -> anyhow::Result<Self> {
        let file = match &flags.config {
            Some(path) => read_config(path)?,
            None => ConfigFile::default(),
        };
        let defaults = BaselineParams::default();
        let cfg = RunConfig {
            threshold: flags.threshold.or(file.threshold).unwrap_or(DEFAULT_THRESHOLD),
            bin_width: flags.bin_width.or(file.bin_width).unwrap_or(DEFAULT_BIN_WIDTH),
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            lexicon: flags.lexicon.or(file.lexicon),
            stopwords: flags.stopwords.or(file.stopwords),
            out: flags.out.or(file.out),
            out_hard: flags.out_hard.or(file.out_hard),
            out_easy: flags.out_easy.or(file.out_easy),
            skip_missing: flags.skip_missing || file.skip_missing.unwrap_or(false),
            threads: flags.threads.or(file.threads),
            baseline: BaselineParams {
                max_span_len: flags.max_span_len.or(file.max_span_len).unwrap_or(defaults.max_span_len),
                window: flags.window.or(file.window).unwrap_or(defaults.window),
            },
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> anyhow::Result<()> {
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(usage(format!("--threshold must be in (0, 1], got {}", self.threshold)));
        }
        if !(self.bin_width > 0.0 && self.bin_width <= 1.0) {
            return Err(usage(format!("--bin-width must be in (0, 1], got {}", self.bin_width)));
        }
        if self.threads == Some(0) {
            return Err(usage("--threads must be at least 1"));
        }
        if self.baseline.max_span_len == 0 {
            return Err(usage("--max-span-len must be at least 1"));
        }
        Ok(())
    }

    pub fn require_out(&self) -> anyhow::Result<&Path> {
        self.out.as_deref().ok_or_else(|| usage("--out is required"))
    }
}

fn read_config(path: &Path) -> anyhow::Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))
        .map_err(|e| usage(format!("{e:#}")))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))
}
