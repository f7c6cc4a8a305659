//! Synonym lexicon stored as JSON lines and a hash-seeded synonym chooser.
//!
//! Each line is `{"word": <lemma>, "synonyms": [<phrase>, ...]}`. Lemmas and
//! phrases are case-folded, underscores in phrases become spaces
//! (WordNet-style `text_file`), phrases that contain punctuation tokens or
//! equal the lemma are dropped, and repeated lines for a lemma extend its
//! list in file order.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::text::{simple_lemma, tokenize};

const TEST_LEXICON: &str = include_str!("test_lexicon.jsonl");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("failed to read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed lexicon entry on line {line}: {message}")]
    Malformed { line: usize, message: String },
}

#[derive(Deserialize)]
struct Entry {
    word: String,
    synonyms: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct SynonymLexicon {
    entries: HashMap<String, Vec<String>>,
    dropped: usize,
}

fn clean_phrase(raw: &str) -> Option<String> {
    let lowered = raw.to_lowercase().replace('_', " ");
    let tokens = tokenize(&lowered);
    if tokens.is_empty() || tokens.iter().any(|t| t.is_punct) {
        return None;
    }
    Some(tokens.iter().map(|t| t.lower.as_str()).collect::<Vec<_>>().join(" "))
}

impl SynonymLexicon {
    pub fn parse(content: &str) -> Result<Self, LexiconError> {
        let mut entries: HashMap<String, Vec<String>> = HashMap::new();
        for (i, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: Entry = serde_json::from_str(line).map_err(|e| LexiconError::Malformed {
                line: i + 1,
                message: e.to_string(),
            })?;
            let word = entry.word.trim().to_lowercase();
            if word.is_empty() {
                return Err(LexiconError::Malformed {
                    line: i + 1,
                    message: "empty word".into(),
                });
            }
            let list = entries.entry(word.clone()).or_default();
            for phrase in entry.synonyms.iter().filter_map(|s| clean_phrase(s)) {
                if phrase != word && !list.contains(&phrase) {
                    list.push(phrase);
                }
            }
        }
        let before = entries.len();
        entries.retain(|_, list| !list.is_empty());
        let dropped = before - entries.len();
        Ok(SynonymLexicon { entries, dropped })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&content)
    }

    /// Small built-in lexicon holding `heresy → heterodoxy` and
    /// `document → text file`.
    pub fn test_lexicon() -> Self {
        Self::parse(TEST_LEXICON).expect("embedded lexicon is well-formed")
    }

    /// Lemmas whose synonym list was empty after filtering.
    pub fn dropped_entries(&self) -> usize {
        self.dropped
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Looks up the word itself, then its plural-stripped lemma. The query
    /// word is never part of the result.
    pub fn synonyms(&self, surface_lower: &str) -> Vec<&str> {
        let list = self.entries.get(surface_lower).or_else(|| {
            if surface_lower.is_empty() {
                None
            } else {
                self.entries.get(&simple_lemma(surface_lower))
            }
        });
        list.map(|l| {
            l.iter()
                .map(String::as_str)
                .filter(|p| *p != surface_lower)
                .collect()
        })
        .unwrap_or_default()
    }
}

/// Picks synonyms as a pure function of `(seed, example id, word)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededChooser {
    pub global_seed: u64,
}

impl SeededChooser {
    pub fn new(global_seed: u64) -> Self {
        SeededChooser { global_seed }
    }

    fn draw(&self, example_id: &str, lemma: &str) -> u64 {
        let mut h = Sha256::new();
        h.update(self.global_seed.to_le_bytes());
        h.update((example_id.len() as u64).to_le_bytes());
        h.update(example_id.as_bytes());
        h.update((lemma.len() as u64).to_le_bytes());
        h.update(lemma.as_bytes());
        let digest = h.finalize();
        let mut first = [0u8; 8];
        first.copy_from_slice(&digest[..8]);
        u64::from_le_bytes(first)
    }

    /// Panics if `candidates` is empty.
    pub fn choose<'a, S: AsRef<str>>(&self, example_id: &str, lemma: &str, candidates: &'a [S]) -> &'a S {
        assert!(!candidates.is_empty(), "choose requires at least one candidate");
        let n = candidates.len() as u128;
        let idx = ((self.draw(example_id, lemma) as u128 * n) >> 64) as usize;
        &candidates[idx]
    }
}
