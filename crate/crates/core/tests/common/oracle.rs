//! Brute-force reference implementations that share no code with the
//! library, plus the hand-computed fixtures they are checked on.

/// Lowercase, keep letters/digits/spaces, drop articles.
pub fn normalize(s: &str) -> Vec<String> {
    let mut cleaned = String::new();
    for c in s.chars() {
        for l in c.to_lowercase() {
            if l.is_alphanumeric() || l.is_whitespace() {
                cleaned.push(l);
            }
        }
    }
    cleaned
        .split_whitespace()
        .filter(|w| *w != "a" && *w != "an" && *w != "the")
        .map(String::from)
        .collect()
}

pub fn em(pred: &str, golds: &[&str]) -> f64 {
    let p = normalize(pred);
    if golds.iter().any(|g| normalize(g) == p) {
        1.0
    } else {
        0.0
    }
}

fn f1_one(pred: &[String], gold: &[String]) -> f64 {
    if pred.is_empty() && gold.is_empty() {
        return 1.0;
    }
    if pred.is_empty() || gold.is_empty() {
        return 0.0;
    }
    let mut used = vec![false; gold.len()];
    let mut common = 0.0;
    for p in pred {
        if let Some(j) = (0..gold.len()).find(|&j| !used[j] && gold[j] == *p) {
            used[j] = true;
            common += 1.0;
        }
    }
    if common == 0.0 {
        return 0.0;
    }
    let prec = common / pred.len() as f64;
    let rec = common / gold.len() as f64;
    2.0 * prec * rec / (prec + rec)
}

pub fn f1(pred: &str, golds: &[&str]) -> f64 {
    let p = normalize(pred);
    golds.iter().map(|g| f1_one(&p, &normalize(g))).fold(0.0, f64::max)
}

/// Counts every n-gram by linear scan over a list of (gram, count).
fn grams(tokens: &[String], n: usize) -> Vec<(Vec<String>, usize)> {
    let mut out: Vec<(Vec<String>, usize)> = Vec::new();
    if tokens.len() < n {
        return out;
    }
    for i in 0..=tokens.len() - n {
        let g = tokens[i..i + n].to_vec();
        match out.iter_mut().find(|(k, _)| *k == g) {
            Some((_, c)) => *c += 1,
            None => out.push((g, 1)),
        }
    }
    out
}

pub fn bleu(cands: &[Vec<String>], refs: &[Vec<String>]) -> f64 {
    let mut num = [0usize; 4];
    let mut den = [0usize; 4];
    let (mut c, mut r) = (0usize, 0usize);
    for (cand, reference) in cands.iter().zip(refs) {
        c += cand.len();
        r += reference.len();
        for n in 1..=4 {
            let rg = grams(reference, n);
            for (g, cnt) in grams(cand, n) {
                let rc = rg.iter().find(|(k, _)| *k == g).map(|(_, v)| *v).unwrap_or(0);
                num[n - 1] += cnt.min(rc);
                den[n - 1] += cnt;
            }
        }
    }
    let mut log_sum = 0.0;
    for n in 0..4 {
        if num[n] == 0 {
            return 0.0;
        }
        log_sum += (num[n] as f64 / den[n] as f64).ln();
    }
    let bp = if c < r { (1.0 - r as f64 / c as f64).exp() } else { 1.0 };
    bp * (log_sum / 4.0).exp()
}

/// Counts question words (split on spaces, punctuation peeled off as
/// separate words) that occur in the context.
pub fn qclo(q: &str, c: &str) -> (usize, usize) {
    fn words(s: &str) -> Vec<String> {
        let mut out = Vec::new();
        for raw in s.split_whitespace() {
            let mut cur = String::new();
            for ch in raw.chars() {
                if ch.is_alphanumeric() {
                    cur.push(ch);
                } else {
                    if !cur.is_empty() {
                        out.push(cur.to_lowercase());
                        cur.clear();
                    }
                    out.push(ch.to_string());
                }
            }
            if !cur.is_empty() {
                out.push(cur.to_lowercase());
            }
        }
        out
    }
    let cw = words(c);
    let qw = words(q);
    (qw.iter().filter(|w| cw.contains(w)).count(), qw.len())
}

/// (prediction, golds, hand EM, hand F1)
pub fn em_f1_fixture() -> Vec<(&'static str, Vec<&'static str>, f64, f64)> {
    vec![
        ("Glasgow, Scotland", vec!["Glasgow, Scotland"], 1.0, 1.0),
        ("the business", vec!["business"], 1.0, 1.0),
        ("entertainment", vec!["business"], 0.0, 0.0),
        ("business device", vec!["business"], 0.0, 2.0 / 3.0),
        ("Royal Infirmary", vec!["the Royal and Western Infirmaries"], 0.0, 1.0 / 3.0),
        ("in 1850", vec!["1850", "in the year 1850"], 0.0, 0.8),
        ("a", vec!["the"], 1.0, 1.0),
        ("", vec!["Paris"], 0.0, 0.0),
        ("Paris Paris", vec!["Paris"], 0.0, 2.0 / 3.0),
        ("New York City", vec!["new york", "York City, New"], 0.0, 1.0),
    ]
}

pub fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

pub fn bleu_corpus() -> (Vec<Vec<String>>, Vec<Vec<String>>) {
    let pairs = [
        ("the cat sat on the mat", "the cat sat on a mat"),
        ("what is the capital of france ?", "what is the capital city of france ?"),
        ("who wrote the novel in 1850 ?", "who wrote the famous novel ?"),
        ("where is the royal infirmary located ?", "where is royal and western infirmaries located ?"),
        ("how many documents remain classified ?", "how many text file remain classified ?"),
        ("when did the war end", "in which year did the long war finally end ?"),
    ];
    pairs.iter().map(|(c, r)| (toks(c), toks(r))).unzip()
}
