//! Question-context lexical overlap (QCLO) toolkit for extractive QA
//! datasets in the SQuAD v1.1 format.
//!
//! * [`corpus`] loads, validates, saves and mixes datasets.
//! * [`text`] tokenizes, tests stopwords and normalizes answers.
//! * [`lexicon`] holds the synonym lexicon and the seeded chooser.
//! * [`overlap`] computes QCLO, Hard/Easy buckets, splits and histograms.
//! * [`augment`] generates low-overlap questions by synonym replacement.
//! * [`eval`] scores predictions (EM/F1) and generated questions (BLEU-4).
//! * [`baseline`] is a sliding-window QA heuristic used as a demonstrator.

pub mod augment;
pub mod baseline;
pub mod corpus;
pub mod eval;
pub mod lexicon;
pub mod overlap;
pub mod text;

pub use augment::{AugmentRun, AugmentStats, AugmentedExample, Augmenter, Replacement};
pub use corpus::{load_dataset, merge_datasets, save_dataset, AnswerSpan, Article, Context, CorpusError, Dataset, QAExample};
pub use eval::{bleu4, bucketed_bleu, evaluate, exact_match, f1, EvalError, EvalReport, PredictionSet};
pub use lexicon::{SeededChooser, SynonymLexicon};
pub use overlap::{bucket_of, histogram, qclo, split_dataset, Bucket, Histogram, QcloValue};
pub use text::{normalize_answer, tokenize, StopwordSet, Token};
