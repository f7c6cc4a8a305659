//! Synonym-replacement augmentation that lowers question-context overlap.
//!
//! For each question: list the question tokens that also occur in the
//! context, replace every non-stopword among them with a synonym from the
//! lexicon, and keep the rewritten question only if its overlap ratio went
//! strictly down. Each source question gets exactly one attempt.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{AnswerSpan, Article, Context, Dataset, QAExample};
use crate::lexicon::{SeededChooser, SynonymLexicon};
use crate::overlap::{context_types, qclo_tokens, QcloValue};
use crate::text::{char_byte_offsets, is_stopword, tokenize, StopwordSet, Token};

pub const SYNTHETIC_ID_SUFFIX: &str = "-syn";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replacement {
    pub original_surface: String,
    /// The lexicon phrase, before any capitalization is applied.
    pub chosen_phrase: String,
    pub token_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentedExample {
    pub source_id: String,
    pub new_id: String,
    pub new_question: String,
    pub replacements: Vec<Replacement>,
    pub qclo_before: QcloValue,
    pub qclo_after: QcloValue,
    pub answers: Vec<AnswerSpan>,
    pub context: String,
}

impl AugmentedExample {
    pub fn to_example(&self) -> QAExample {
        QAExample {
            id: self.new_id.clone(),
            question: self.new_question.clone(),
            answers: self.answers.clone(),
        }
    }
}

/// One line of the replacement audit log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub source_id: String,
    pub new_id: String,
    pub replacements: Vec<Replacement>,
    pub qclo_before: QcloValue,
    pub qclo_after: QcloValue,
}

impl From<&AugmentedExample> for AuditRecord {
    fn from(a: &AugmentedExample) -> Self {
        AuditRecord {
            source_id: a.source_id.clone(),
            new_id: a.new_id.clone(),
            replacements: a.replacements.clone(),
            qclo_before: a.qclo_before,
            qclo_after: a.qclo_after,
        }
    }
}

/// Borrowed inputs shared by every augmentation call.
#[derive(Debug, Clone, Copy)]
pub struct Augmenter<'a> {
    pub lexicon: &'a SynonymLexicon,
    pub stopwords: &'a StopwordSet,
    pub chooser: SeededChooser,
}

/// Question tokens whose lowered form occurs in the context, with their
/// positions, in question order.
pub fn overlapping_words(question: &str, context: &str) -> Vec<(usize, Token)> {
    let ctx = context_types(context);
    tokenize(question)
        .into_iter()
        .enumerate()
        .filter(|(_, t)| ctx.contains(&t.lower))
        .collect()
}

fn capitalize_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn starts_uppercase(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

struct Candidate {
    question: String,
    replacements: Vec<Replacement>,
}

impl Augmenter<'_> {
    fn substitute_tokens(
        &self,
        question: &str,
        tokens: &[Token],
        ctx: &HashSet<String>,
        example_id: &str,
    ) -> Candidate {
        let mut chosen: HashMap<&str, Option<&str>> = HashMap::new();
        let mut replacements = Vec::new();
        for (i, tok) in tokens.iter().enumerate() {
            if !ctx.contains(&tok.lower) || is_stopword(tok, self.stopwords) {
                continue;
            }
            let pick = *chosen.entry(tok.lower.as_str()).or_insert_with(|| {
                let candidates = self.lexicon.synonyms(&tok.lower);
                if candidates.is_empty() {
                    None
                } else {
                    Some(*self.chooser.choose(example_id, &tok.lower, &candidates))
                }
            });
            if let Some(phrase) = pick {
                replacements.push(Replacement {
                    original_surface: tok.surface.clone(),
                    chosen_phrase: phrase.to_string(),
                    token_index: i,
                });
            }
        }

        // Splice phrases into the original string so untouched spacing and
        // punctuation attachment are preserved.
        let offsets = char_byte_offsets(question);
        let mut out = String::with_capacity(question.len() + 16);
        let mut cursor = 0;
        for r in &replacements {
            let tok = &tokens[r.token_index];
            out.push_str(&question[cursor..offsets[tok.start]]);
            if starts_uppercase(&tok.surface) {
                out.push_str(&capitalize_first(&r.chosen_phrase));
            } else {
                out.push_str(&r.chosen_phrase);
            }
            cursor = offsets[tok.end];
        }
        out.push_str(&question[cursor..]);
        Candidate {
            question: out,
            replacements,
        }
    }

    /// Rewrites every overlapping non-stopword that has synonyms. The same
    /// phrase is used for all occurrences of a word within one question.
    pub fn substitute(&self, question: &str, context: &str, example_id: &str) -> (String, Vec<Replacement>) {
        let c = self.substitute_tokens(question, &tokenize(question), &context_types(context), example_id);
        (c.question, c.replacements)
    }

    fn augment_with_types(&self, ex: &QAExample, context: &str, ctx: &HashSet<String>) -> Outcome {
        let tokens = tokenize(&ex.question);
        let Ok(before) = qclo_tokens(&tokens, ctx) else {
            return Outcome::NoReplacement;
        };
        let cand = self.substitute_tokens(&ex.question, &tokens, ctx, &ex.id);
        if cand.replacements.is_empty() {
            return Outcome::NoReplacement;
        }
        let after = match qclo_tokens(&tokenize(&cand.question), ctx) {
            Ok(v) => v,
            Err(_) => return Outcome::NotDecreased,
        };
        if after >= before {
            return Outcome::NotDecreased;
        }
        Outcome::Accepted(Box::new(AugmentedExample {
            source_id: ex.id.clone(),
            new_id: format!("{}{SYNTHETIC_ID_SUFFIX}", ex.id),
            new_question: cand.question,
            replacements: cand.replacements,
            qclo_before: before,
            qclo_after: after,
            answers: ex.answers.clone(),
            context: context.to_string(),
        }))
    }

    /// Returns the synthetic example only if at least one word was replaced
    /// and the overlap ratio strictly decreased.
    pub fn augment_example(&self, ex: &QAExample, context: &str) -> Option<AugmentedExample> {
        match self.augment_with_types(ex, context, &context_types(context)) {
            Outcome::Accepted(a) => Some(*a),
            _ => None,
        }
    }

    /// One attempt per source example. The synthetic dataset keeps the
    /// article/context layout of the source, minus contexts without accepted
    /// examples. Output is independent of the rayon thread count.
    pub fn augment_dataset(&self, ds: &Dataset) -> AugmentRun {
        let mut stats = AugmentStats::default();
        let mut audit = Vec::new();
        let mut articles = Vec::new();
        let mut before_sum = 0.0;
        let mut after_sum = 0.0;

        let jobs: Vec<(usize, usize)> = ds
            .articles
            .iter()
            .enumerate()
            .flat_map(|(ai, a)| (0..a.contexts.len()).map(move |ci| (ai, ci)))
            .collect();
        let results: Vec<Vec<Outcome>> = jobs
            .par_iter()
            .map(|&(ai, ci)| {
                let c = &ds.articles[ai].contexts[ci];
                let ctx = context_types(&c.text);
                c.examples
                    .iter()
                    .map(|e| self.augment_with_types(e, &c.text, &ctx))
                    .collect()
            })
            .collect();

        let mut results = results.into_iter();
        for a in &ds.articles {
            let mut contexts = Vec::new();
            for c in &a.contexts {
                let outcomes = results.next().expect("one result per context");
                let mut examples = Vec::new();
                for outcome in outcomes {
                    stats.attempted += 1;
                    match outcome {
                        Outcome::Accepted(aug) => {
                            stats.accepted += 1;
                            before_sum += aug.qclo_before.value();
                            after_sum += aug.qclo_after.value();
                            audit.push(AuditRecord::from(aug.as_ref()));
                            examples.push(aug.to_example());
                        }
                        Outcome::NoReplacement => stats.no_replacement += 1,
                        Outcome::NotDecreased => stats.not_decreased += 1,
                    }
                }
                if !examples.is_empty() {
                    contexts.push(Context {
                        text: c.text.clone(),
                        examples,
                    });
                }
            }
            if !contexts.is_empty() {
                articles.push(Article {
                    title: a.title.clone(),
                    contexts,
                });
            }
        }
        stats.discarded = stats.no_replacement + stats.not_decreased;
        if stats.accepted > 0 {
            stats.mean_qclo_before = Some(before_sum / stats.accepted as f64);
            stats.mean_qclo_after = Some(after_sum / stats.accepted as f64);
        }
        AugmentRun {
            synthetic: Dataset::new(format!("{}{SYNTHETIC_ID_SUFFIX}", ds.name), articles),
            stats,
            audit,
        }
    }
}

enum Outcome {
    Accepted(Box<AugmentedExample>),
    NoReplacement,
    NotDecreased,
}

/// Acceptance counts. Means are taken over accepted examples only.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AugmentStats {
    pub attempted: usize,
    pub accepted: usize,
    pub discarded: usize,
    /// Discarded because no overlapping word had a synonym.
    pub no_replacement: usize,
    /// Discarded because the ratio did not go down.
    pub not_decreased: usize,
    pub mean_qclo_before: Option<f64>,
    pub mean_qclo_after: Option<f64>,
}

impl AugmentStats {
    pub fn acceptance_rate(&self) -> f64 {
        if self.attempted == 0 {
            0.0
        } else {
            self.accepted as f64 / self.attempted as f64
        }
    }
}

#[derive(Debug, Clone)]
pub struct AugmentRun {
    pub synthetic: Dataset,
    pub stats: AugmentStats,
    pub audit: Vec<AuditRecord>,
}

impl AugmentRun {
    pub fn audit_jsonl(&self) -> String {
        let mut out = String::new();
        for rec in &self.audit {
            out.push_str(&serde_json::to_string(rec).expect("audit record serializes"));
            out.push('\n');
        }
        out
    }
}
