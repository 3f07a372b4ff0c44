//! Keyword retrieval over method names and doc strings.
//!
//! Scores are TF-IDF cosine similarities with log-scaled term frequency
//! (`1 + ln tf`) and smoothed inverse document frequency
//! (`1 + ln((1 + N) / (1 + df))`).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::typemodel::CorpusEntry;

pub const DEFAULT_TOP_K: usize = 10;

/// Lowercase word tokens. Identifiers split at camelCase humps, digits and
/// underscores; everything that is not alphanumeric separates tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut prev: Option<char> = None;
    let chars: Vec<char> = text.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        if !c.is_alphanumeric() {
            flush(&mut current, &mut out);
            prev = None;
            continue;
        }
        if let Some(p) = prev {
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            let boundary = (p.is_lowercase() && c.is_uppercase())
                || (p.is_uppercase() && c.is_uppercase() && next_lower)
                || (p.is_ascii_digit() != c.is_ascii_digit());
            if boundary {
                flush(&mut current, &mut out);
            }
        }
        current.extend(c.to_lowercase());
        prev = Some(c);
    }
    flush(&mut current, &mut out);
    out
}

fn flush(current: &mut String, out: &mut Vec<String>) {
    if !current.is_empty() {
        out.push(core::mem::take(current));
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchIndex {
    /// Token to number of documents containing it.
    vocabulary: BTreeMap<String, usize>,
    /// Per entry, in corpus order: id and term frequencies.
    postings: Vec<(String, BTreeMap<String, usize>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchHit {
    pub entry_id: String,
    pub score: f64,
}

impl SearchIndex {
    pub fn build(entries: &[CorpusEntry]) -> SearchIndex {
        let mut index = SearchIndex::default();
        for entry in entries {
            let mut tf: BTreeMap<String, usize> = BTreeMap::new();
            for token in tokenize(&entry.signature.name).into_iter().chain(tokenize(&entry.doc)) {
                *tf.entry(token).or_default() += 1;
            }
            for token in tf.keys() {
                *index.vocabulary.entry(token.clone()).or_default() += 1;
            }
            index.postings.push((entry.id.clone(), tf));
        }
        index
    }

    pub fn len(&self) -> usize {
        self.postings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.postings.is_empty()
    }

    pub fn document_frequency(&self, token: &str) -> usize {
        self.vocabulary.get(token).copied().unwrap_or(0)
    }

    fn idf(&self, token: &str) -> f64 {
        let n = self.postings.len() as f64;
        1.0 + libm::log((1.0 + n) / (1.0 + self.document_frequency(token) as f64))
    }

    fn weights(&self, tf: &BTreeMap<String, usize>) -> BTreeMap<String, f64> {
        tf.iter()
            .filter(|(t, _)| self.vocabulary.contains_key(*t))
            .map(|(t, &n)| (t.clone(), (1.0 + libm::log(n as f64)) * self.idf(t)))
            .collect()
    }

    /// Top `k` entries by cosine similarity to `query`, best first; equal
    /// scores keep corpus order and zero scores are dropped.
    pub fn search(&self, query: &str, k: usize) -> Vec<SearchHit> {
        let mut qtf: BTreeMap<String, usize> = BTreeMap::new();
        for token in tokenize(query) {
            *qtf.entry(token).or_default() += 1;
        }
        let q = self.weights(&qtf);
        let qnorm = norm(&q);
        if qnorm == 0.0 {
            return Vec::new();
        }
        let mut hits: Vec<SearchHit> = Vec::new();
        for (id, tf) in &self.postings {
            let d = self.weights(tf);
            let dot: f64 = q.iter().filter_map(|(t, w)| d.get(t).map(|v| v * w)).sum();
            if dot > 0.0 {
                hits.push(SearchHit { entry_id: id.clone(), score: dot / (qnorm * norm(&d)) });
            }
        }
        // Stable sort keeps corpus order among equal scores.
        hits.sort_by(|a, b| b.score.total_cmp(&a.score));
        hits.truncate(k);
        hits
    }
}

fn norm(v: &BTreeMap<String, f64>) -> f64 {
    libm::sqrt(v.values().map(|w| w * w).sum())
}

/// Builds a fresh index over `entries` and queries it.
pub fn keyword_search(entries: &[CorpusEntry], query: &str, k: usize) -> Vec<SearchHit> {
    SearchIndex::build(entries).search(query, k)
}
