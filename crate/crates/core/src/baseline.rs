//! A sliding-window overlap heuristic for extractive QA.
//!
//! This is a deterministic demonstrator, not a learned model: a span scores
//! one point for every distinct question keyword found within `window`
//! tokens on either side of it, and loses one point for each of its own
//! tokens that already appears in the question. It only works when the
//! question shares words with the text around the answer, which makes the
//! low-overlap gap visible without a neural reader.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Dataset;
use crate::eval::PredictionSet;
use crate::text::{char_byte_offsets, is_stopword, tokenize, StopwordSet, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaselineParams {
    pub max_span_len: usize,
    pub window: usize,
}

impl Default for BaselineParams {
    fn default() -> Self {
        BaselineParams {
            max_span_len: 4,
            window: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanCandidate {
    /// Inclusive token indices into the context.
    pub start_token: usize,
    pub end_token: usize,
    pub score: i64,
    pub text: String,
}

struct QuestionTerms {
    /// Non-stopword lowered question types.
    keywords: HashSet<String>,
    /// Every non-punctuation lowered question type.
    all: HashSet<String>,
}

impl QuestionTerms {
    fn new(question: &str, sw: &StopwordSet) -> Self {
        let tokens = tokenize(question);
        let keywords = tokens
            .iter()
            .filter(|t| !is_stopword(t, sw))
            .map(|t| t.lower.clone())
            .collect();
        let all = tokens
            .iter()
            .filter(|t| !t.is_punct)
            .map(|t| t.lower.clone())
            .collect();
        QuestionTerms { keywords, all }
    }
}

fn span_score(ctx: &[Token], start: usize, end: usize, window: usize, q: &QuestionTerms) -> i64 {
    let left = start.saturating_sub(window)..start;
    let right = (end + 1)..(end + 1 + window).min(ctx.len());
    let nearby: HashSet<&str> = left
        .chain(right)
        .map(|i| ctx[i].lower.as_str())
        .filter(|w| q.keywords.contains(*w))
        .collect();
    let penalty = ctx[start..=end]
        .iter()
        .filter(|t| !t.is_punct && q.all.contains(&t.lower))
        .count();
    nearby.len() as i64 - penalty as i64
}

fn usable_boundary(tok: &Token, sw: &StopwordSet) -> bool {
    !is_stopword(tok, sw)
}

/// All valid spans with their scores, ordered by start then length.
pub fn score_spans(context: &str, question: &str, params: BaselineParams, sw: &StopwordSet) -> Vec<SpanCandidate> {
    let ctx = tokenize(context);
    let q = QuestionTerms::new(question, sw);
    let offsets = char_byte_offsets(context);
    let mut out = Vec::new();
    for start in 0..ctx.len() {
        if !usable_boundary(&ctx[start], sw) {
            continue;
        }
        for len in 1..=params.max_span_len {
            let end = start + len - 1;
            if end >= ctx.len() {
                break;
            }
            if !usable_boundary(&ctx[end], sw) {
                continue;
            }
            out.push(SpanCandidate {
                start_token: start,
                end_token: end,
                score: span_score(&ctx, start, end, params.window, &q),
                text: context[offsets[ctx[start].start]..offsets[ctx[end].end]].to_string(),
            });
        }
    }
    out
}

/// Highest-scoring span; ties go to the earliest start, then the shortest
/// span. Returns an empty string when no span qualifies.
pub fn sliding_window_answer(context: &str, question: &str, params: BaselineParams, sw: &StopwordSet) -> String {
    let mut best: Option<SpanCandidate> = None;
    for cand in score_spans(context, question, params, sw) {
        // Candidates arrive in (start, length) order, so only a strictly
        // higher score displaces the current best.
        if best.as_ref().is_none_or(|b| cand.score > b.score) {
            best = Some(cand);
        }
    }
    best.map(|b| b.text).unwrap_or_default()
}

pub fn run_baseline(ds: &Dataset, params: BaselineParams, sw: &StopwordSet) -> PredictionSet {
    let refs: Vec<_> = ds.examples().collect();
    refs.par_iter()
        .map(|r| {
            (
                r.example.id.clone(),
                sliding_window_answer(&r.context.text, &r.example.question, params, sw),
            )
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}
