//! Question-context lexical overlap (QCLO): the share of question tokens
//! whose case-folded form also occurs among the context tokens.
//!
//! Stopwords and punctuation are counted. The numerator counts token
//! occurrences, the context side is a set of types.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Dataset;
use crate::text::{tokenize, Token};

pub const DEFAULT_THRESHOLD: f64 = 0.3;
pub const DEFAULT_BIN_WIDTH: f64 = 0.1;

#[derive(Debug, Error, PartialEq)]
pub enum OverlapError {
    #[error("question has no tokens")]
    EmptyQuestion,
    #[error("bin width {0} does not divide 1 evenly")]
    BadBinWidth(f64),
    #[error("cannot build a histogram of an empty dataset")]
    EmptyDataset,
}

/// An exact ratio `numerator / denominator` with `denominator >= 1`.
///
/// Equality and ordering compare the rational values, so `2/4 == 1/2`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QcloValue {
    pub numerator: usize,
    pub denominator: usize,
}

impl QcloValue {
    pub fn new(numerator: usize, denominator: usize) -> Self {
        assert!(denominator >= 1 && numerator <= denominator, "invalid overlap ratio {numerator}/{denominator}");
        QcloValue {
            numerator,
            denominator,
        }
    }

    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl PartialEq for QcloValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QcloValue {}

impl PartialOrd for QcloValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QcloValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for QcloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bucket {
    Hard,
    Easy,
}

impl fmt::Display for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bucket::Hard => "hard",
            Bucket::Easy => "easy",
        })
    }
}

/// Lowercased context token types.
pub fn context_types(context: &str) -> HashSet<String> {
    tokenize(context).into_iter().map(|t| t.lower).collect()
}

pub(crate) fn qclo_tokens(question: &[Token], context: &HashSet<String>) -> Result<QcloValue, OverlapError> {
    if question.is_empty() {
        return Err(OverlapError::EmptyQuestion);
    }
    let hits = question.iter().filter(|t| context.contains(&t.lower)).count();
    Ok(QcloValue::new(hits, question.len()))
}

pub fn qclo(question: &str, context: &str) -> Result<QcloValue, OverlapError> {
    qclo_tokens(&tokenize(question), &context_types(context))
}

/// Easy iff the ratio is strictly above `threshold`.
pub fn bucket_of(v: QcloValue, threshold: f64) -> Bucket {
    if v.value() > threshold {
        Bucket::Easy
    } else {
        Bucket::Hard
    }
}

/// QCLO of every example in file order. Validated datasets never have
/// empty questions, so this only fails on unvalidated input.
pub fn dataset_qclos(ds: &Dataset) -> Result<Vec<QcloValue>, OverlapError> {
    let refs: Vec<_> = ds.examples().collect();
    refs.par_iter()
        .map(|r| qclo(&r.example.question, &r.context.text))
        .collect()
}

pub fn split_dataset(ds: &Dataset, threshold: f64) -> Result<(Dataset, Dataset), OverlapError> {
    let buckets: Vec<Bucket> = dataset_qclos(ds)?
        .into_iter()
        .map(|v| bucket_of(v, threshold))
        .collect();
    let mut hard_marks = buckets.iter();
    let hard = ds.filter(format!("{}-hard", ds.name), |_| hard_marks.next() == Some(&Bucket::Hard));
    let mut easy_marks = buckets.iter();
    let easy = ds.filter(format!("{}-easy", ds.name), |_| easy_marks.next() == Some(&Bucket::Easy));
    Ok((hard, easy))
}

/// Number of equal-width bins covering `[0, 1]`.
pub fn bin_count(bin_width: f64) -> Result<usize, OverlapError> {
    if !(bin_width > 0.0 && bin_width <= 1.0) {
        return Err(OverlapError::BadBinWidth(bin_width));
    }
    let n = (1.0 / bin_width).round();
    if (n * bin_width - 1.0).abs() > 1e-9 {
        return Err(OverlapError::BadBinWidth(bin_width));
    }
    Ok(n as usize)
}

/// Bin `k` covers `[k/bins, (k+1)/bins)`; the last bin also takes 1.0.
/// Computed in integers so that e.g. 3/10 lands in `[0.3, 0.4)`.
pub fn bin_index(v: QcloValue, bins: usize) -> usize {
    let k = (v.numerator as u128 * bins as u128 / v.denominator as u128) as usize;
    k.min(bins - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub total: usize,
    pub bins: Vec<HistogramBin>,
}

impl Histogram {
    pub fn from_values(values: &[QcloValue], bin_width: f64) -> Result<Self, OverlapError> {
        if values.is_empty() {
            return Err(OverlapError::EmptyDataset);
        }
        let n = bin_count(bin_width)?;
        let mut counts = vec![0usize; n];
        for v in values {
            counts[bin_index(*v, n)] += 1;
        }
        let total = values.len();
        let bins = counts
            .into_iter()
            .enumerate()
            .map(|(k, count)| HistogramBin {
                bin_lo: k as f64 / n as f64,
                bin_hi: (k + 1) as f64 / n as f64,
                count,
                percent: 100.0 * count as f64 / total as f64,
            })
            .collect();
        Ok(Histogram {
            bin_width,
            total,
            bins,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count,percent\n");
        for b in &self.bins {
            out.push_str(&format!("{:.4},{:.4},{},{:.4}\n", b.bin_lo, b.bin_hi, b.count, b.percent));
        }
        out
    }
}

pub fn histogram(ds: &Dataset, bin_width: f64) -> Result<Histogram, OverlapError> {
    Histogram::from_values(&dataset_qclos(ds)?, bin_width)
}

/// Summary statistics of a set of overlap values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QcloSummary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
}

impl QcloSummary {
    pub fn from_values(values: &[QcloValue]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort();
        let n = sorted.len();
        let median = if n % 2 == 1 {
            sorted[n / 2].value()
        } else {
            (sorted[n / 2 - 1].value() + sorted[n / 2].value()) / 2.0
        };
        let mean = values.iter().map(QcloValue::value).sum::<f64>() / n as f64;
        Some(QcloSummary {
            count: n,
            mean,
            median,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_ordering_is_exact() {
        assert_eq!(QcloValue::new(2, 4), QcloValue::new(1, 2));
        assert!(QcloValue::new(1, 3) < QcloValue::new(2, 6 - 1));
        assert!(QcloValue::new(3, 10) < QcloValue::new(4, 13));
    }

    #[test]
    fn disjoint_vocabulary() {
        let v = qclo("Who won?", "Paris is big.").unwrap();
        assert_eq!((v.numerator, v.denominator), (0, 3));
        assert_eq!(v.value(), 0.0);
    }

    #[test]
    fn empty_question_errors() {
        assert_eq!(qclo(" ", "ctx").unwrap_err(), OverlapError::EmptyQuestion);
    }

    #[test]
    fn repeated_tokens_count_per_occurrence() {
        let v = qclo("use use what", "we use it").unwrap();
        assert_eq!((v.numerator, v.denominator), (2, 3));
    }

    #[test]
    fn buckets() {
        assert_eq!(bucket_of(QcloValue::new(29, 100), 0.3), Bucket::Hard);
        assert_eq!(bucket_of(QcloValue::new(62, 100), 0.3), Bucket::Easy);
        assert_eq!(bucket_of(QcloValue::new(3, 10), 0.3), Bucket::Hard);
        assert_eq!(bucket_of(QcloValue::new(6, 20), 0.3), Bucket::Hard);
        assert_eq!(bucket_of(QcloValue::new(31, 100), 0.3), Bucket::Easy);
    }

    #[test]
    fn bin_widths() {
        assert_eq!(bin_count(0.1).unwrap(), 10);
        assert_eq!(bin_count(0.05).unwrap(), 20);
        assert_eq!(bin_count(1.0).unwrap(), 1);
        assert!(bin_count(0.3).is_err());
        assert!(bin_count(0.0).is_err());
        assert!(bin_count(-0.5).is_err());
        assert!(bin_count(f64::NAN).is_err());
    }

    #[test]
    fn bin_edges_are_exact() {
        assert_eq!(bin_index(QcloValue::new(3, 10), 10), 3);
        assert_eq!(bin_index(QcloValue::new(7, 10), 10), 7);
        assert_eq!(bin_index(QcloValue::new(1, 1), 10), 9);
        assert_eq!(bin_index(QcloValue::new(0, 5), 10), 0);
        assert_eq!(bin_index(QcloValue::new(4, 14), 10), 2);
        assert_eq!(bin_index(QcloValue::new(5, 8), 10), 6);
    }

    #[test]
    fn single_full_overlap_fills_last_bin() {
        let h = Histogram::from_values(&[QcloValue::new(4, 4)], 0.1).unwrap();
        assert_eq!(h.bins[9].count, 1);
        assert_eq!(h.bins[9].percent, 100.0);
    }

    #[test]
    fn empty_histogram_errors() {
        assert_eq!(Histogram::from_values(&[], 0.1).unwrap_err(), OverlapError::EmptyDataset);
    }

    #[test]
    fn summary_median() {
        let s = QcloSummary::from_values(&[QcloValue::new(1, 2), QcloValue::new(0, 1), QcloValue::new(1, 1)]).unwrap();
        assert_eq!(s.median, 0.5);
        assert_eq!(s.mean, 0.5);
        let s = QcloSummary::from_values(&[QcloValue::new(1, 4), QcloValue::new(3, 4)]).unwrap();
        assert_eq!(s.median, 0.5);
    }
}
