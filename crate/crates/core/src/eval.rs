//! SQuAD-style EM/F1 and corpus BLEU-4, reported overall and per overlap
//! bucket.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Dataset;
use crate::overlap::{bin_count, bin_index, bucket_of, dataset_qclos, Bucket, OverlapError};
use crate::text::{normalize_answer, tokenize};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {message}")]
    Parse { path: String, message: String },
    #[error("ids not present in the dataset: {}", .0.join(", "))]
    UnknownIds(Vec<String>),
    #[error("{} dataset ids have no prediction (first: {})", .0.len(), .0.first().map(String::as_str).unwrap_or(""))]
    MissingIds(Vec<String>),
    #[error("candidate and reference counts differ ({candidates} vs {references})")]
    LengthMismatch { candidates: usize, references: usize },
    #[error("empty corpus")]
    EmptyCorpus,
    #[error(transparent)]
    Overlap(#[from] OverlapError),
}

/// Maps example id to a string: a predicted answer or a generated question.
pub type PredictionSet = BTreeMap<String, String>;

/// Reads a `{id: string}` JSON object.
pub fn load_predictions(path: impl AsRef<Path>) -> Result<PredictionSet, EvalError> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&content).map_err(|e| EvalError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn exact_match(pred: &str, golds: &[impl AsRef<str>]) -> f64 {
    let p = normalize_answer(pred);
    if golds.iter().any(|g| normalize_answer(g.as_ref()) == p) {
        1.0
    } else {
        0.0
    }
}

fn f1_single(pred: &str, gold: &str) -> f64 {
    let p_norm = normalize_answer(pred);
    let g_norm = normalize_answer(gold);
    let p: Vec<&str> = p_norm.split_whitespace().collect();
    let g: Vec<&str> = g_norm.split_whitespace().collect();
    if p.is_empty() || g.is_empty() {
        return if p.is_empty() && g.is_empty() { 1.0 } else { 0.0 };
    }
    let mut gold_counts: HashMap<&str, usize> = HashMap::new();
    for w in &g {
        *gold_counts.entry(w).or_default() += 1;
    }
    let mut same = 0usize;
    for w in &p {
        if let Some(c) = gold_counts.get_mut(w) {
            if *c > 0 {
                *c -= 1;
                same += 1;
            }
        }
    }
    if same == 0 {
        return 0.0;
    }
    let precision = same as f64 / p.len() as f64;
    let recall = same as f64 / g.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Token F1 maximized over the gold answers.
pub fn f1(pred: &str, golds: &[impl AsRef<str>]) -> f64 {
    golds
        .iter()
        .map(|g| f1_single(pred, g.as_ref()))
        .fold(0.0, f64::max)
}

/// Scores for one bucket. EM and F1 are percentages; `None` for an empty
/// bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketScores {
    pub count: usize,
    pub em: Option<f64>,
    pub f1: Option<f64>,
}

impl BucketScores {
    fn from_sums(count: usize, em_sum: f64, f1_sum: f64) -> Self {
        if count == 0 {
            return BucketScores {
                count,
                em: None,
                f1: None,
            };
        }
        BucketScores {
            count,
            em: Some(100.0 * em_sum / count as f64),
            f1: Some(100.0 * f1_sum / count as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub threshold: f64,
    pub hard: BucketScores,
    pub easy: BucketScores,
    pub all: BucketScores,
    /// Dataset examples left out because they had no prediction.
    pub skipped: usize,
}

fn fmt_score(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}")).unwrap_or_default()
}

impl EvalReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bucket,count,em,f1\n");
        for (name, b) in [("hard", &self.hard), ("easy", &self.easy), ("all", &self.all)] {
            out.push_str(&format!("{name},{},{},{}\n", b.count, fmt_score(b.em), fmt_score(b.f1)));
        }
        out
    }

    /// `Hard EM/F1 | Easy EM/F1 | ALL EM/F1` on one line.
    pub fn table_row(&self) -> String {
        let cell = |b: &BucketScores| match (b.em, b.f1) {
            (Some(em), Some(f1)) => format!("{em:.2}/{f1:.2}"),
            _ => "-/-".to_string(),
        };
        format!(
            "Hard {} (n={}) | Easy {} (n={}) | ALL {} (n={})",
            cell(&self.hard),
            self.hard.count,
            cell(&self.easy),
            self.easy.count,
            cell(&self.all),
            self.all.count
        )
    }
}

fn check_ids(ds: &Dataset, preds: &PredictionSet, skip_missing: bool) -> Result<usize, EvalError> {
    let ids: HashSet<&str> = ds.examples().map(|r| r.example.id.as_str()).collect();
    let unknown: Vec<String> = preds
        .keys()
        .filter(|k| !ids.contains(k.as_str()))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(EvalError::UnknownIds(unknown));
    }
    let missing: Vec<String> = ds
        .examples()
        .map(|r| &r.example.id)
        .filter(|id| !preds.contains_key(id.as_str()))
        .cloned()
        .collect();
    if !missing.is_empty() && !skip_missing {
        return Err(EvalError::MissingIds(missing));
    }
    Ok(missing.len())
}

/// Mean EM and F1 per bucket, with buckets assigned by each example's
/// question-context overlap.
pub fn evaluate(ds: &Dataset, preds: &PredictionSet, threshold: f64, skip_missing: bool) -> Result<EvalReport, EvalError> {
    let skipped = check_ids(ds, preds, skip_missing)?;
    let qclos = dataset_qclos(ds)?;
    // (count, em_sum, f1_sum) for hard, easy
    let mut sums = [(0usize, 0.0f64, 0.0f64); 2];
    for (r, v) in ds.examples().zip(qclos) {
        let Some(pred) = preds.get(&r.example.id) else {
            continue;
        };
        let golds: Vec<&str> = r.example.answers.iter().map(|a| a.text.as_str()).collect();
        let slot = match bucket_of(v, threshold) {
            Bucket::Hard => &mut sums[0],
            Bucket::Easy => &mut sums[1],
        };
        slot.0 += 1;
        slot.1 += exact_match(pred, &golds);
        slot.2 += f1(pred, &golds);
    }
    let [h, e] = sums;
    Ok(EvalReport {
        threshold,
        hard: BucketScores::from_sums(h.0, h.1, h.2),
        easy: BucketScores::from_sums(e.0, e.1, e.2),
        all: BucketScores::from_sums(h.0 + e.0, h.1 + e.1, h.2 + e.2),
        skipped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuScore {
    pub bleu: f64,
    pub precisions: [f64; 4],
    pub matches: [usize; 4],
    pub totals: [usize; 4],
    pub brevity_penalty: f64,
    pub candidate_length: usize,
    pub reference_length: usize,
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            let key: Vec<&str> = w.iter().map(AsRef::as_ref).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    counts
}

/// Corpus BLEU-4 with one reference per candidate and no smoothing.
pub fn bleu4<S: AsRef<str>>(candidates: &[Vec<S>], references: &[Vec<S>]) -> Result<BleuScore, EvalError> {
    if candidates.len() != references.len() {
        return Err(EvalError::LengthMismatch {
            candidates: candidates.len(),
            references: references.len(),
        });
    }
    if candidates.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let mut matches = [0usize; 4];
    let mut totals = [0usize; 4];
    let mut c_len = 0;
    let mut r_len = 0;
    for (cand, reference) in candidates.iter().zip(references) {
        c_len += cand.len();
        r_len += reference.len();
        for n in 1..=4 {
            let c_counts = ngram_counts(cand, n);
            let r_counts = ngram_counts(reference, n);
            for (gram, count) in &c_counts {
                matches[n - 1] += (*count).min(r_counts.get(gram).copied().unwrap_or(0));
            }
            totals[n - 1] += cand.len().saturating_sub(n - 1);
        }
    }
    let mut precisions = [0.0; 4];
    for n in 0..4 {
        if totals[n] > 0 {
            precisions[n] = matches[n] as f64 / totals[n] as f64;
        }
    }
    let brevity_penalty = if c_len == 0 {
        0.0
    } else if c_len < r_len {
        (1.0 - r_len as f64 / c_len as f64).exp()
    } else {
        1.0
    };
    let bleu = if precisions.contains(&0.0) {
        0.0
    } else {
        brevity_penalty * (precisions.iter().map(|p| p.ln()).sum::<f64>() / 4.0).exp()
    };
    Ok(BleuScore {
        bleu,
        precisions,
        matches,
        totals,
        brevity_penalty,
        candidate_length: c_len,
        reference_length: r_len,
    })
}

type TokenSeq = Vec<String>;

/// Lowercased tokens, the unit BLEU is computed over.
pub fn bleu_tokens(text: &str) -> Vec<String> {
    tokenize(text).into_iter().map(|t| t.lower).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuBin {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: usize,
    pub score: Option<BleuScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuReport {
    pub bin_width: f64,
    pub bins: Vec<BleuBin>,
    pub overall: Option<BleuScore>,
    pub skipped: usize,
}

impl BleuReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count,bleu4,p1,p2,p3,p4,brevity_penalty\n");
        for b in &self.bins {
            match &b.score {
                Some(s) => out.push_str(&format!(
                    "{:.4},{:.4},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                    b.bin_lo, b.bin_hi, b.count, s.bleu, s.precisions[0], s.precisions[1], s.precisions[2], s.precisions[3], s.brevity_penalty
                )),
                None => out.push_str(&format!("{:.4},{:.4},0,,,,,,\n", b.bin_lo, b.bin_hi)),
            }
        }
        out
    }
}

/// Corpus BLEU-4 of generated questions against the dataset questions,
/// grouped by the overlap bin of the reference question.
pub fn bucketed_bleu(
    ds: &Dataset,
    generated: &PredictionSet,
    bin_width: f64,
    skip_missing: bool,
) -> Result<BleuReport, EvalError> {
    let skipped = check_ids(ds, generated, skip_missing)?;
    let n_bins = bin_count(bin_width)?;
    let qclos = dataset_qclos(ds)?;
    let mut per_bin: Vec<(Vec<TokenSeq>, Vec<TokenSeq>)> = vec![(Vec::new(), Vec::new()); n_bins];
    for (r, v) in ds.examples().zip(qclos) {
        let Some(gen) = generated.get(&r.example.id) else {
            continue;
        };
        let slot = &mut per_bin[bin_index(v, n_bins)];
        slot.0.push(bleu_tokens(gen));
        slot.1.push(bleu_tokens(&r.example.question));
    }
    let mut bins = Vec::with_capacity(n_bins);
    let mut all_c = Vec::new();
    let mut all_r = Vec::new();
    for (k, (cands, refs)) in per_bin.into_iter().enumerate() {
        let score = if cands.is_empty() {
            None
        } else {
            Some(bleu4(&cands, &refs)?)
        };
        bins.push(BleuBin {
            bin_lo: k as f64 / n_bins as f64,
            bin_hi: (k + 1) as f64 / n_bins as f64,
            count: cands.len(),
            score,
        });
        all_c.extend(cands);
        all_r.extend(refs);
    }
    let overall = if all_c.is_empty() {
        None
    } else {
        Some(bleu4(&all_c, &all_r)?)
    };
    Ok(BleuReport {
        bin_width,
        bins,
        overall,
        skipped,
    })
}
