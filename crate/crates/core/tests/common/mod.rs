#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use qclo_core::{AnswerSpan, Article, Context, Dataset, QAExample, SynonymLexicon};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const IPOD_CONTEXT: &str = "Besides earning a reputation as a respected entertainment device, the iPod has also been accepted as a business device. Government departments, major institutions and international organisations have turned to the iPod line as a delivery mechanism for business communication and training, such as the Royal and Western Infirmaries in Glasgow, Scotland, where iPods are used to train new staff.";

/// (question, numerator, denominator)
pub const IPOD_QUESTIONS: [(&str, usize, usize); 4] = [
    ("Where is Royal and Western Infirmaries located?", 5, 8),
    ("Aside from recreational use, in what other arena have iPods found use?", 4, 14),
    ("Where is the Royal and Western Infirmaries located?", 6, 9),
    ("The iPod has been accepted as what kind of device?", 7, 11),
];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

const CONTENT_WORDS: &[&str] = &[
    "river", "castle", "engine", "harbour", "merchant", "treaty", "bishop", "garden", "mountain", "library",
    "village", "empire", "painter", "railway", "market", "soldier", "temple", "island", "copper", "festival",
    "bridge", "council", "forest", "valley", "museum", "theatre", "novel", "colony", "palace", "canal",
];
const NOVEL_WORDS: &[&str] = &[
    "stream", "fortress", "motor", "port", "trader", "accord", "prelate", "orchard", "peak", "archive",
    "hamlet", "realm", "artist", "tramway", "bazaar", "trooper", "shrine", "isle", "bronze", "fete",
];
const FUNCTION_WORDS: &[&str] = &["the", "of", "in", "what", "which", "is", "was", "by", "and", "to", "a", "how", "many"];
const PUNCT: &[&str] = &[",", ";", "?", "."];

fn pick<'a>(rng: &mut ChaCha8Rng, words: &[&'a str]) -> &'a str {
    words[rng.random_range(0..words.len())]
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

pub fn random_context(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(12..40);
    let mut words = Vec::with_capacity(n);
    for _ in 0..n {
        let w = match rng.random_range(0..10) {
            0..=4 => pick(rng, CONTENT_WORDS),
            5..=7 => pick(rng, FUNCTION_WORDS),
            8 => pick(rng, PUNCT),
            _ => pick(rng, NOVEL_WORDS),
        };
        words.push(w.to_string());
    }
    words.push(".".into());
    words.join(" ")
}

pub fn random_question(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(2..12);
    let mut words: Vec<String> = Vec::with_capacity(n + 1);
    for _ in 0..n {
        let w: String = match rng.random_range(0..10) {
            0..=4 => pick(rng, CONTENT_WORDS).to_string(),
            5..=6 => pick(rng, FUNCTION_WORDS).to_string(),
            7 => pick(rng, PUNCT).to_string(),
            8 => {
                let w = pick(rng, CONTENT_WORDS);
                if rng.random_bool(0.5) {
                    format!("{w}s")
                } else {
                    capitalize(w)
                }
            }
            _ => pick(rng, NOVEL_WORDS).to_string(),
        };
        words.push(w);
    }
    words.push("?".into());
    words.join(" ")
}

/// Each content word maps to 1-3 phrases drawn from every word list, so
/// some synonyms already occur in the context and some are multiword.
pub fn random_lexicon(rng: &mut ChaCha8Rng) -> SynonymLexicon {
    let mut lines = Vec::new();
    for w in CONTENT_WORDS {
        if rng.random_bool(0.2) {
            continue;
        }
        let k = rng.random_range(1..4);
        let mut syns = Vec::new();
        for _ in 0..k {
            let phrase = match rng.random_range(0..4) {
                0 => pick(rng, CONTENT_WORDS).to_string(),
                1 => format!("{} {}", pick(rng, NOVEL_WORDS), pick(rng, CONTENT_WORDS)),
                _ => pick(rng, NOVEL_WORDS).to_string(),
            };
            syns.push(phrase);
        }
        lines.push(serde_json::json!({"word": w, "synonyms": syns}).to_string());
    }
    SynonymLexicon::parse(&lines.join("\n")).unwrap()
}

/// A valid dataset with `n` examples spread over a few articles. Each answer
/// is the first word of its context.
pub fn random_dataset(rng: &mut ChaCha8Rng, n: usize, id_prefix: &str) -> Dataset {
    let mut articles = Vec::new();
    let mut made = 0;
    let mut art = 0;
    while made < n {
        let mut contexts = Vec::new();
        for _ in 0..rng.random_range(1..5) {
            if made == n {
                break;
            }
            let text = random_context(rng);
            let first = text.split(' ').next().unwrap().to_string();
            let mut examples = Vec::new();
            for _ in 0..rng.random_range(1..6) {
                if made == n {
                    break;
                }
                examples.push(QAExample {
                    id: format!("{id_prefix}{made:06}"),
                    question: random_question(rng),
                    answers: vec![AnswerSpan {
                        text: first.clone(),
                        answer_start: 0,
                    }],
                });
                made += 1;
            }
            contexts.push(Context { text, examples });
        }
        articles.push(Article {
            title: format!("article-{art}"),
            contexts,
        });
        art += 1;
    }
    Dataset::new("random", articles)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn one_context(text: &str, qas: &[(&str, &str, &str)]) -> Dataset {
    let examples = qas
        .iter()
        .map(|(id, q, a)| QAExample {
            id: id.to_string(),
            question: q.to_string(),
            answers: vec![AnswerSpan {
                text: a.to_string(),
                answer_start: text[..text.find(a).expect("answer in context")].chars().count(),
            }],
        })
        .collect();
    Dataset::new(
        "fixture",
        vec![Article {
            title: "fixture".into(),
            contexts: vec![Context {
                text: text.into(),
                examples,
            }],
        }],
    )
}
