//! SQuAD v1.1 datasets: loading with validation, atomic saving and seeded
//! merging.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{char_byte_offsets, tokenize};

pub const SQUAD_VERSION: &str = "1.1";
pub const MERGED_TITLE: &str = "merged";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in {path} at byte {offset} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid dataset: {0}")]
    Validation(ValidationReport),
    #[error("id collision between merged datasets: {}", .0.join(", "))]
    IdCollision(Vec<String>),
}

/// Every offending id grouped by the rule it breaks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub span_mismatch: Vec<String>,
    pub duplicate_ids: Vec<String>,
    pub empty_answers: Vec<String>,
    pub empty_questions: Vec<String>,
    /// `(article title, paragraph index)` of contexts with empty text.
    pub empty_contexts: Vec<(String, usize)>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.span_mismatch.is_empty()
            && self.duplicate_ids.is_empty()
            && self.empty_answers.is_empty()
            && self.empty_questions.is_empty()
            && self.empty_contexts.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if !self.span_mismatch.is_empty() {
            parts.push(format!("answer span mismatch for ids [{}]", self.span_mismatch.join(", ")));
        }
        if !self.duplicate_ids.is_empty() {
            parts.push(format!("duplicate ids [{}]", self.duplicate_ids.join(", ")));
        }
        if !self.empty_answers.is_empty() {
            parts.push(format!("no answers for ids [{}]", self.empty_answers.join(", ")));
        }
        if !self.empty_questions.is_empty() {
            parts.push(format!("empty question for ids [{}]", self.empty_questions.join(", ")));
        }
        if !self.empty_contexts.is_empty() {
            let locs: Vec<String> = self
                .empty_contexts
                .iter()
                .map(|(t, i)| format!("{t}#{i}"))
                .collect();
            parts.push(format!("empty context at [{}]", locs.join(", ")));
        }
        f.write_str(&parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerSpan {
    pub text: String,
    /// Offset in code points, not bytes.
    pub answer_start: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QAExample {
    pub id: String,
    pub question: String,
    pub answers: Vec<AnswerSpan>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Context {
    #[serde(rename = "context")]
    pub text: String,
    #[serde(rename = "qas")]
    pub examples: Vec<QAExample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub title: String,
    #[serde(rename = "paragraphs")]
    pub contexts: Vec<Context>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub name: String,
    pub articles: Vec<Article>,
}

/// A borrowed example together with the context it belongs to.
#[derive(Debug, Clone, Copy)]
pub struct ExampleRef<'a> {
    pub title: &'a str,
    pub context: &'a Context,
    pub example: &'a QAExample,
}

#[derive(Serialize, Deserialize)]
struct SquadFile {
    #[serde(default)]
    version: Option<String>,
    data: Vec<Article>,
}

#[derive(Serialize)]
struct SquadFileRef<'a> {
    version: &'a str,
    data: &'a [Article],
}

impl Dataset {
    pub fn new(name: impl Into<String>, articles: Vec<Article>) -> Self {
        Dataset {
            name: name.into(),
            articles,
        }
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Self::new(name, Vec::new())
    }

    /// Examples in file order.
    pub fn examples(&self) -> impl Iterator<Item = ExampleRef<'_>> {
        self.articles.iter().flat_map(|a| {
            a.contexts.iter().flat_map(move |c| {
                c.examples.iter().map(move |e| ExampleRef {
                    title: &a.title,
                    context: c,
                    example: e,
                })
            })
        })
    }

    pub fn len(&self) -> usize {
        self.articles
            .iter()
            .flat_map(|a| &a.contexts)
            .map(|c| c.examples.len())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ids(&self) -> Vec<&str> {
        self.examples().map(|r| r.example.id.as_str()).collect()
    }

    /// Keeps the examples for which `keep` is true, dropping contexts and
    /// articles left without examples.
    pub fn filter(&self, name: impl Into<String>, mut keep: impl FnMut(ExampleRef<'_>) -> bool) -> Dataset {
        let mut articles = Vec::new();
        for a in &self.articles {
            let mut contexts = Vec::new();
            for c in &a.contexts {
                let examples: Vec<QAExample> = c
                    .examples
                    .iter()
                    .filter(|e| {
                        keep(ExampleRef {
                            title: &a.title,
                            context: c,
                            example: e,
                        })
                    })
                    .cloned()
                    .collect();
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
        Dataset::new(name, articles)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut seen = HashSet::new();
        for a in &self.articles {
            for (ci, c) in a.contexts.iter().enumerate() {
                if c.text.is_empty() {
                    report.empty_contexts.push((a.title.clone(), ci));
                }
                let offsets = char_byte_offsets(&c.text);
                for e in &c.examples {
                    if !seen.insert(e.id.as_str()) {
                        report.duplicate_ids.push(e.id.clone());
                    }
                    if tokenize(&e.question).is_empty() {
                        report.empty_questions.push(e.id.clone());
                    }
                    if e.answers.is_empty() {
                        report.empty_answers.push(e.id.clone());
                    } else if !e.answers.iter().all(|ans| span_matches(&c.text, &offsets, ans)) {
                        report.span_mismatch.push(e.id.clone());
                    }
                }
            }
        }
        report
    }
}

fn span_matches(context: &str, offsets: &[usize], ans: &AnswerSpan) -> bool {
    let len = ans.text.chars().count();
    let end = ans.answer_start + len;
    if end >= offsets.len() {
        return false;
    }
    context[offsets[ans.answer_start]..offsets[end]] == ans.text
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn byte_offset(content: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = content
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(content.len())
}

pub fn parse_dataset(name: &str, content: &str, path_label: &str) -> Result<Dataset, CorpusError> {
    let file: SquadFile = serde_json::from_str(content).map_err(|e| CorpusError::Parse {
        path: path_label.to_string(),
        offset: byte_offset(content, e.line(), e.column()),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let ds = Dataset::new(name, file.data);
    let report = ds.validate();
    if !report.is_ok() {
        return Err(CorpusError::Validation(report));
    }
    Ok(ds)
}

/// Loads and validates a SQuAD v1.1 file. The dataset name is the file stem.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset, CorpusError> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(io_err(path))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_dataset(&name, &content, &path.display().to_string())
}

pub fn to_json(ds: &Dataset) -> String {
    let file = SquadFileRef {
        version: SQUAD_VERSION,
        data: &ds.articles,
    };
    serde_json::to_string(&file).expect("dataset serialization is infallible")
}

pub fn save_dataset(ds: &Dataset, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    write_atomic(path.as_ref(), to_json(ds).as_bytes())
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CorpusError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| CorpusError::Io {
        path: path.display().to_string(),
        source: e.error,
    })?;
    Ok(())
}

/// Mixes two datasets into a single flat article whose example order is a
/// seeded uniform permutation of the union. Each example keeps its own copy
/// of its context.
pub fn merge_datasets(gold: &Dataset, synthetic: &Dataset, seed: u64) -> Result<Dataset, CorpusError> {
    let gold_ids: HashSet<&str> = gold.examples().map(|r| r.example.id.as_str()).collect();
    let collisions: Vec<String> = synthetic
        .examples()
        .map(|r| r.example.id.as_str())
        .filter(|id| gold_ids.contains(id))
        .map(str::to_string)
        .collect();
    if !collisions.is_empty() {
        return Err(CorpusError::IdCollision(collisions));
    }

    let mut contexts: Vec<Context> = gold
        .examples()
        .chain(synthetic.examples())
        .map(|r| Context {
            text: r.context.text.clone(),
            examples: vec![r.example.clone()],
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    contexts.shuffle(&mut rng);

    let articles = if contexts.is_empty() {
        Vec::new()
    } else {
        vec![Article {
            title: MERGED_TITLE.to_string(),
            contexts,
        }]
    };
    Ok(Dataset::new(format!("{}+{}", gold.name, synthetic.name), articles))
}
