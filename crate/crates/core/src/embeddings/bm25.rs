use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 1.2, b: 0.75 }
    }
}

/// Corpus statistics plus one aggregate weight per word.
///
/// A word's weight is the mean of its BM25 score over the documents that
/// contain it, so every word gets a single corpus-level value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bm25Weights {
    params: Bm25Params,
    doc_count: usize,
    avg_len: f64,
    doc_freq: BTreeMap<String, usize>,
    weights: BTreeMap<String, f64>,
}

impl Bm25Weights {
    pub fn from_documents<D, W>(documents: &[D], params: Bm25Params) -> Self
    where
        D: AsRef<[W]>,
        W: AsRef<str>,
    {
        let doc_count = documents.len();
        let total: usize = documents.iter().map(|d| d.as_ref().len()).sum();
        let avg_len = if doc_count == 0 {
            0.0
        } else {
            total as f64 / doc_count as f64
        };

        let counts: Vec<HashMap<&str, usize>> = documents
            .iter()
            .map(|d| {
                let mut tf = HashMap::new();
                for w in d.as_ref() {
                    *tf.entry(w.as_ref()).or_insert(0) += 1;
                }
                tf
            })
            .collect();
        let mut doc_freq = BTreeMap::new();
        for tf in &counts {
            for word in tf.keys() {
                *doc_freq.entry(word.to_string()).or_insert(0) += 1;
            }
        }

        let mut this = Bm25Weights {
            params,
            doc_count,
            avg_len,
            doc_freq,
            weights: BTreeMap::new(),
        };
        let mut sums: BTreeMap<String, f64> = BTreeMap::new();
        for (doc, tf) in documents.iter().zip(&counts) {
            let len = doc.as_ref().len();
            for (word, &n) in tf {
                let score = this.score(word, n, len);
                *sums.entry(word.to_string()).or_insert(0.0) += score;
            }
        }
        this.weights = sums
            .into_iter()
            .map(|(w, s)| {
                let df = this.doc_freq[&w] as f64;
                (w, s / df)
            })
            .collect();
        this
    }

    pub fn params(&self) -> Bm25Params {
        self.params
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn avg_len(&self) -> f64 {
        self.avg_len
    }

    pub fn doc_freq(&self, word: &str) -> usize {
        self.doc_freq.get(word).copied().unwrap_or(0)
    }

    /// `ln(1 + (N - df + 0.5) / (df + 0.5))`, always positive.
    pub fn idf(&self, word: &str) -> f64 {
        let n = self.doc_count as f64;
        let df = self.doc_freq(word) as f64;
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    }

    /// Score of `word` occurring `tf` times in a document of `doc_len` words.
    pub fn score(&self, word: &str, tf: usize, doc_len: usize) -> f64 {
        if tf == 0 {
            return 0.0;
        }
        let Bm25Params { k1, b } = self.params;
        let tf = tf as f64;
        let norm = if self.avg_len > 0.0 {
            doc_len as f64 / self.avg_len
        } else {
            1.0
        };
        self.idf(word) * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm))
    }

    /// Aggregate weight; `None` for words absent from the corpus.
    pub fn weight(&self, word: &str) -> Option<f64> {
        self.weights.get(word).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(w, v)| (w.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}
