use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _};
use qclo_core::corpus::write_atomic;
use qclo_core::eval::{bucketed_bleu, load_predictions};
use qclo_core::overlap::{dataset_qclos, Histogram, QcloSummary};
use qclo_core::{
    baseline, evaluate, load_dataset, merge_datasets, save_dataset, split_dataset, Augmenter, Dataset, SeededChooser,
    StopwordSet, SynonymLexicon,
};
use serde::Serialize;

use crate::config::{usage, RunConfig};

#[derive(Serialize)]
struct StatsReport<'a> {
    dataset: &'a str,
    count: usize,
    mean_qclo: f64,
    median_qclo: f64,
    histogram: Histogram,
}

fn load(path: &Path) -> anyhow::Result<Dataset> {
    load_dataset(path).with_context(|| format!("loading {}", path.display()))
}

fn stopwords(cfg: &RunConfig) -> anyhow::Result<StopwordSet> {
    match &cfg.stopwords {
        Some(p) => StopwordSet::load(p).with_context(|| format!("loading stopwords {}", p.display())),
        None => Ok(StopwordSet::default()),
    }
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> anyhow::Result<()> {
    write_atomic(path, bytes.as_ref()).with_context(|| format!("writing {}", path.display()))
}

fn write_json(path: &Path, value: &impl Serialize) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write(path, text)
}

/// `dir/stem.out.json` plus `suffix` -> `dir/stem.out<suffix>`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

pub fn stats(cfg: &RunConfig, dataset: &Path) -> anyhow::Result<()> {
    let out = cfg.require_out()?;
    let ds = load(dataset)?;
    if ds.is_empty() {
        bail!("{} contains no questions", dataset.display());
    }
    let values = dataset_qclos(&ds)?;
    let summary = QcloSummary::from_values(&values).expect("non-empty");
    let histogram = Histogram::from_values(&values, cfg.bin_width)?;
    let csv = histogram.to_csv();
    let report = StatsReport {
        dataset: &ds.name,
        count: summary.count,
        mean_qclo: summary.mean,
        median_qclo: summary.median,
        histogram,
    };
    write_json(out, &report)?;
    write(&out.with_extension("csv"), csv)?;
    println!(
        "{}: {} questions, mean QCLO {:.4}, median {:.4}",
        ds.name, summary.count, summary.mean, summary.median
    );
    Ok(())
}

pub fn split(cfg: &RunConfig, dataset: &Path) -> anyhow::Result<()> {
    let (Some(out_hard), Some(out_easy)) = (&cfg.out_hard, &cfg.out_easy) else {
        return Err(usage("split needs --out-hard and --out-easy"));
    };
    let ds = load(dataset)?;
    let (hard, easy) = split_dataset(&ds, cfg.threshold)?;
    save_dataset(&hard, out_hard)?;
    save_dataset(&easy, out_easy)?;
    println!("hard {} / easy {} (threshold {})", hard.len(), easy.len(), cfg.threshold);
    Ok(())
}

pub fn augment(cfg: &RunConfig, dataset: &Path) -> anyhow::Result<()> {
    let out = cfg.require_out()?;
    let Some(lex_path) = &cfg.lexicon else {
        return Err(usage("augment needs --lexicon"));
    };
    let ds = load(dataset)?;
    let lexicon = SynonymLexicon::load(lex_path).with_context(|| format!("loading lexicon {}", lex_path.display()))?;
    let sw = stopwords(cfg)?;
    let aug = Augmenter {
        lexicon: &lexicon,
        stopwords: &sw,
        chooser: SeededChooser::new(cfg.seed),
    };
    let run = aug.augment_dataset(&ds);
    save_dataset(&run.synthetic, out)?;
    write_json(&sibling(out, ".stats.json"), &run.stats)?;
    write(&sibling(out, ".audit.jsonl"), run.audit_jsonl())?;
    println!(
        "accepted {} of {} ({:.2}%)",
        run.stats.accepted,
        run.stats.attempted,
        100.0 * run.stats.acceptance_rate()
    );
    Ok(())
}

pub fn merge(cfg: &RunConfig, gold: &Path, synthetic: &Path) -> anyhow::Result<()> {
    let out = cfg.require_out()?;
    let merged = merge_datasets(&load(gold)?, &load(synthetic)?, cfg.seed)?;
    save_dataset(&merged, out)?;
    println!("merged {} examples", merged.len());
    Ok(())
}

pub fn eval(cfg: &RunConfig, dataset: &Path, predictions: &Path) -> anyhow::Result<()> {
    let out = cfg.require_out()?;
    let ds = load(dataset)?;
    let preds = load_predictions(predictions).with_context(|| format!("loading {}", predictions.display()))?;
    let report = evaluate(&ds, &preds, cfg.threshold, cfg.skip_missing)?;
    write_json(out, &report)?;
    write(&out.with_extension("csv"), report.to_csv())?;
    println!("{}", report.table_row());
    Ok(())
}

pub fn bleu(cfg: &RunConfig, dataset: &Path, generated: &Path) -> anyhow::Result<()> {
    let out = cfg.require_out()?;
    let ds = load(dataset)?;
    let gen = load_predictions(generated).with_context(|| format!("loading {}", generated.display()))?;
    let report = bucketed_bleu(&ds, &gen, cfg.bin_width, cfg.skip_missing)?;
    write_json(out, &report)?;
    write(&out.with_extension("csv"), report.to_csv())?;
    match &report.overall {
        Some(s) => println!("BLEU-4 {:.4}", s.bleu),
        None => println!("BLEU-4 n/a (no scored questions)"),
    }
    Ok(())
}

pub fn baseline(cfg: &RunConfig, dataset: &Path) -> anyhow::Result<()> {
    let out = cfg.require_out()?;
    let ds = load(dataset)?;
    let preds = baseline::run_baseline(&ds, cfg.baseline, &stopwords(cfg)?);
    write_json(out, &preds)?;
    println!("answered {} questions", preds.len());
    Ok(())
}
