//! Term normalization: thesaurus substitution (short/long forms, synonyms)
//! with a suffix-stripping stemmer as fallback.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::OnceLock;

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

use super::AnnotatedCorpus;
use crate::error::{Error, Result};

/// Variant → representative mappings, case-folded, with chains resolved so
/// every representative is terminal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thesaurus {
    entries: BTreeMap<String, String>,
}

impl Thesaurus {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Lines are `variant TAB representative`; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw: BTreeMap<String, (String, usize)> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (variant, rep) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(line_no, "expected `variant<TAB>representative`"))?;
            let variant = fold(variant);
            let rep = fold(rep);
            if variant.is_empty() || rep.is_empty() {
                return Err(Error::parse(line_no, "empty variant or representative"));
            }
            if rep.contains('\t') {
                return Err(Error::parse(line_no, "too many columns"));
            }
            if variant != rep {
                raw.insert(variant, (rep, line_no));
            }
        }

        let mut entries = BTreeMap::new();
        for (variant, (rep, line_no)) in &raw {
            let mut seen = BTreeSet::from([variant.clone()]);
            let mut target = rep.clone();
            while let Some((next, _)) = raw.get(&target) {
                if !seen.insert(target.clone()) {
                    return Err(Error::parse(*line_no, format!("cycle through {variant:?}")));
                }
                target = next.clone();
            }
            entries.insert(variant.clone(), target);
        }
        Ok(Thesaurus { entries })
    }

    pub fn from_pairs<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let text: String = pairs
            .into_iter()
            .map(|(a, b)| format!("{}\t{}\n", a.as_ref(), b.as_ref()))
            .collect();
        Self::parse(&text)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, term: &str) -> Option<&str> {
        self.entries.get(term).map(String::as_str)
    }

    pub fn is_representative(&self, term: &str) -> bool {
        self.entries.values().any(|r| r == term)
    }

    /// Longest variant length in words, for multi-word substitution.
    fn max_variant_words(&self) -> usize {
        self.entries
            .keys()
            .map(|k| k.split_whitespace().count())
            .max()
            .unwrap_or(0)
    }

    /// Replace variants in a case-folded word sequence, longest match first.
    pub fn substitute_words(&self, words: &[String]) -> Vec<String> {
        let max = self.max_variant_words();
        let mut out = Vec::with_capacity(words.len());
        let mut i = 0;
        'outer: while i < words.len() {
            for len in (1..=max.min(words.len() - i)).rev() {
                let candidate = words[i..i + len].join(" ");
                if let Some(rep) = self.lookup(&candidate) {
                    out.extend(rep.split_whitespace().map(str::to_string));
                    i += len;
                    continue 'outer;
                }
            }
            out.push(words[i].clone());
            i += 1;
        }
        out
    }
}

/// Surface form → representative term for a corpus vocabulary.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationTable {
    entries: BTreeMap<String, String>,
    thesaurus: Thesaurus,
}

impl NormalizationTable {
    pub fn with_thesaurus(thesaurus: Thesaurus) -> Self {
        NormalizationTable {
            entries: BTreeMap::new(),
            thesaurus,
        }
    }

    /// Normalize any word, consulting the precomputed table first.
    pub fn normalize(&self, word: &str) -> String {
        let folded = fold(word);
        if let Some(rep) = self.entries.get(&folded) {
            return rep.clone();
        }
        normalize_term(&folded, &self.thesaurus)
    }

    pub fn get(&self, surface: &str) -> Option<&str> {
        self.entries.get(&fold(surface)).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

pub fn build_normalization(
    corpus: &AnnotatedCorpus,
    thesaurus: Option<&Thesaurus>,
) -> NormalizationTable {
    let thesaurus = thesaurus.cloned().unwrap_or_default();
    let mut entries = BTreeMap::new();
    for tok in corpus.tokens() {
        let folded = fold(&tok.surface);
        if entries.contains_key(&folded) {
            continue;
        }
        let rep = normalize_term(&folded, &thesaurus);
        entries.insert(folded, rep);
    }
    // Representatives map to themselves so the table stays idempotent.
    let reps: Vec<String> = entries.values().cloned().collect();
    for rep in reps {
        entries.insert(rep.clone(), rep);
    }
    NormalizationTable { entries, thesaurus }
}

fn fold(s: &str) -> String {
    s.trim().to_lowercase()
}

fn stemmer() -> &'static Stemmer {
    static STEMMER: OnceLock<Stemmer> = OnceLock::new();
    STEMMER.get_or_init(|| Stemmer::create(Algorithm::English))
}

/// Stem to a fixed point; a single pass is not idempotent for every word.
fn stem(word: &str) -> String {
    let mut current = word.to_string();
    loop {
        let next = stemmer().stem(&current).into_owned();
        if next == current {
            return current;
        }
        current = next;
    }
}

fn normalize_term(folded: &str, thesaurus: &Thesaurus) -> String {
    if let Some(rep) = thesaurus.lookup(folded) {
        return rep.to_string();
    }
    if thesaurus.is_representative(folded) || folded.contains(char::is_whitespace) {
        return folded.to_string();
    }
    if !folded.chars().any(char::is_alphabetic) {
        return folded.to_string();
    }
    let stemmed = stem(folded);
    match thesaurus.lookup(&stemmed) {
        Some(rep) => rep.to_string(),
        None => stemmed,
    }
}
