//! Shared text substrate: word tokenization with code-point offsets,
//! stopword tests, a plural-stripping lemma fallback and SQuAD-style answer
//! normalization.
//!
//! Tokenization rules:
//!
//! * a word token is a maximal run of letters/digits, where an apostrophe or
//!   hyphen sitting between two alphanumerics joins the run (`don't`,
//!   `well-known`, `1973–74`);
//! * every other non-whitespace code point is a token of its own;
//! * whitespace never produces a token.
//!
//! Punctuation is therefore counted as tokens, which is what makes question
//! lengths such as "Where is Royal and Western Infirmaries located?" come out
//! at 8.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use thiserror::Error;

const DEFAULT_STOPWORDS: &str = include_str!("stopwords.txt");

#[derive(Debug, Error)]
pub enum TextError {
    #[error("failed to read stopword file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("stopword file {0} contains no entries")]
    EmptyStopwords(String),
}

/// A token with code-point offsets into the source string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    pub is_punct: bool,
    pub start: usize,
    pub end: usize,
}

impl Token {
    fn new(surface: String, start: usize, end: usize) -> Self {
        let lower = surface.to_lowercase();
        let is_punct = surface.chars().all(is_punct_char);
        Token {
            surface,
            lower,
            is_punct,
            start,
            end,
        }
    }

    pub fn len_chars(&self) -> usize {
        self.end - self.start
    }
}

/// Anything that is neither alphanumeric nor whitespace.
pub fn is_punct_char(c: char) -> bool {
    !c.is_alphanumeric() && !c.is_whitespace() && !is_combining_mark(c)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining_mark(c)
}

// Combining diacritics stay attached to the letter they decorate.
fn is_combining_mark(c: char) -> bool {
    matches!(c as u32, 0x0300..=0x036F | 0x1AB0..=0x1AFF | 0x1DC0..=0x1DFF | 0x20D0..=0x20FF | 0xFE20..=0xFE2F)
}

fn is_joiner(c: char) -> bool {
    matches!(
        c,
        '\'' | '\u{2019}' | '-' | '\u{2010}' | '\u{2011}' | '\u{2013}'
    )
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if is_word_char(c) {
            let start = i;
            i += 1;
            loop {
                if i < chars.len() && is_word_char(chars[i]) {
                    i += 1;
                } else if i + 1 < chars.len() && is_joiner(chars[i]) && is_word_char(chars[i + 1]) {
                    i += 2;
                } else {
                    break;
                }
            }
            tokens.push(Token::new(chars[start..i].iter().collect(), start, i));
        } else {
            tokens.push(Token::new(c.to_string(), i, i + 1));
            i += 1;
        }
    }
    tokens
}

/// Lowercased stopword entries.
#[derive(Debug, Clone)]
pub struct StopwordSet {
    entries: HashSet<String>,
}

impl Default for StopwordSet {
    fn default() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }
}

impl StopwordSet {
    /// One word per line, `#` starts a comment, blank lines are ignored.
    pub fn parse(content: &str) -> Self {
        let entries = content
            .lines()
            .map(|line| line.split('#').next().unwrap_or("").trim())
            .filter(|w| !w.is_empty())
            .map(str::to_lowercase)
            .collect();
        StopwordSet { entries }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TextError> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|source| TextError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let set = Self::parse(&content);
        if set.entries.is_empty() {
            return Err(TextError::EmptyStopwords(path.display().to_string()));
        }
        Ok(set)
    }

    pub fn contains(&self, lower: &str) -> bool {
        self.entries.contains(lower)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Punctuation tokens count as stopwords: they never have synonyms.
pub fn is_stopword(token: &Token, sw: &StopwordSet) -> bool {
    token.is_punct || sw.contains(&token.lower)
}

/// Strips one English plural suffix.
///
/// `ies` becomes `y` for words longer than four characters, `es` is dropped
/// when the remaining stem ends in s/x/z/ch/sh, otherwise a final `s` is
/// dropped from words longer than three characters that do not end in `ss`.
pub fn simple_lemma(word: &str) -> String {
    let len = word.chars().count();
    if len > 4 {
        if let Some(stem) = word.strip_suffix("ies") {
            return format!("{stem}y");
        }
    }
    if let Some(stem) = word.strip_suffix("es") {
        if ["s", "x", "z", "ch", "sh"].iter().any(|e| stem.ends_with(e)) {
            return stem.to_string();
        }
    }
    if len > 3 && !word.ends_with("ss") {
        if let Some(stem) = word.strip_suffix('s') {
            return stem.to_string();
        }
    }
    word.to_string()
}

/// Lowercase, drop punctuation, drop the articles a/an/the, collapse
/// whitespace.
pub fn normalize_answer(text: &str) -> String {
    let lowered = text.to_lowercase();
    let no_punct: String = lowered.chars().filter(|&c| !is_punct_char(c)).collect();
    no_punct
        .split_whitespace()
        .filter(|w| !matches!(*w, "a" | "an" | "the"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Maps code-point offsets to byte offsets for slicing.
pub(crate) fn char_byte_offsets(text: &str) -> Vec<usize> {
    let mut offsets: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
    offsets.push(text.len());
    offsets
}
