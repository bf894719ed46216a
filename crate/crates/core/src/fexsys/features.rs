//! Per-feature extraction functions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedCorpus, Chunk, ChunkKind, SentencePath, Token};
use crate::lang::{AffixKind, CapitalizationMode, ContextScope, PhraseFilter};

pub fn pos_sequence(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| t.pos.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Whole-sequence match of the span's tags against an anchored regex.
pub fn pos_regex_matches(tokens: &[Token], anchored: &regex::Regex) -> bool {
    anchored.is_match(&pos_sequence(tokens))
}

/// Last or first `length` characters; the whole text when shorter. With a
/// pattern, a non-matching affix becomes the empty string.
pub fn affix(
    text: &str,
    kind: AffixKind,
    length: usize,
    anchored: Option<&regex::Regex>,
) -> String {
    let chars: Vec<char> = text.chars().collect();
    let n = length.min(chars.len());
    let out: String = match kind {
        AffixKind::Suffix => chars[chars.len() - n..].iter().collect(),
        AffixKind::Prefix => chars[..n].iter().collect(),
    };
    match anchored {
        Some(re) if !re.is_match(&out) => String::new(),
        _ => out,
    }
}

pub fn capitalization(text: &str, mode: CapitalizationMode) -> bool {
    match mode {
        CapitalizationMode::First => text.chars().next().is_some_and(char::is_uppercase),
        CapitalizationMode::All => {
            let mut letters = text.chars().filter(|c| c.is_alphabetic()).peekable();
            letters.peek().is_some() && letters.all(char::is_uppercase)
        }
        CapitalizationMode::Any => text.chars().any(char::is_uppercase),
    }
}

pub fn special_chars(text: &str, chars: &[char]) -> Vec<bool> {
    chars.iter().map(|c| text.contains(*c)).collect()
}

/// Token order of each document, with paragraph and sentence offsets, so
/// context windows can cross sentence boundaries inside a wider scope.
pub struct Layout<'a> {
    docs: Vec<DocLayout<'a>>,
}

struct DocLayout<'a> {
    tokens: Vec<&'a Token>,
    para_ranges: Vec<(usize, usize)>,
    sent_starts: Vec<Vec<usize>>,
}

impl<'a> Layout<'a> {
    pub fn new(corpus: &'a AnnotatedCorpus) -> Self {
        let docs = corpus
            .documents
            .iter()
            .map(|doc| {
                let mut tokens = Vec::with_capacity(doc.token_count());
                let mut para_ranges = Vec::with_capacity(doc.paragraphs.len());
                let mut sent_starts = Vec::with_capacity(doc.paragraphs.len());
                for para in &doc.paragraphs {
                    let start = tokens.len();
                    let mut starts = Vec::with_capacity(para.sentences.len());
                    for sent in &para.sentences {
                        starts.push(tokens.len());
                        tokens.extend(sent.tokens.iter());
                    }
                    para_ranges.push((start, tokens.len()));
                    sent_starts.push(starts);
                }
                DocLayout {
                    tokens,
                    para_ranges,
                    sent_starts,
                }
            })
            .collect();
        Layout { docs }
    }

    /// Tokens at distance `1..=width` either side of the span, cut at the
    /// scope boundary, in textual order.
    pub fn context(
        &self,
        path: SentencePath,
        start: usize,
        end: usize,
        width: usize,
        scope: ContextScope,
    ) -> Vec<&'a Token> {
        let doc = &self.docs[path.doc];
        let base = doc.sent_starts[path.para][path.sent];
        let (lo, hi) = match scope {
            ContextScope::Sentence => {
                let next = doc.sent_starts[path.para]
                    .get(path.sent + 1)
                    .copied()
                    .unwrap_or(doc.para_ranges[path.para].1);
                (base, next)
            }
            ContextScope::Para => doc.para_ranges[path.para],
            ContextScope::Document => (0, doc.tokens.len()),
        };
        let (gs, ge) = (base + start, base + end);
        let left = gs.saturating_sub(width).max(lo)..gs;
        let right = ge..(ge + width).min(hi);
        left.chain(right).map(|i| doc.tokens[i]).collect()
    }
}

/// Convenience wrapper over [`Layout::context`] returning surface forms.
pub fn context_window(
    corpus: &AnnotatedCorpus,
    path: SentencePath,
    start: usize,
    end: usize,
    width: usize,
    scope: ContextScope,
) -> Vec<String> {
    Layout::new(corpus)
        .context(path, start, end, width, scope)
        .into_iter()
        .map(|t| t.surface.clone())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeadDirection {
    HeadInitial,
    HeadFinal,
    NotInPhrase,
}

impl HeadDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            HeadDirection::HeadInitial => "HeadInitial",
            HeadDirection::HeadFinal => "HeadFinal",
            HeadDirection::NotInPhrase => "NotInPhrase",
        }
    }
}

/// Where the head of the chunk containing `start..end` lies relative to the
/// span: at or after its last token is head-final, anything earlier is
/// head-initial.
pub fn head_directionality(
    chunks: &[Chunk],
    start: usize,
    end: usize,
    filter: PhraseFilter,
) -> HeadDirection {
    let chunk = chunks.iter().find(|c| {
        let kind_ok = match filter {
            PhraseFilter::Any => true,
            PhraseFilter::Np => c.kind == ChunkKind::Np,
            PhraseFilter::Vp => c.kind == ChunkKind::Vp,
        };
        kind_ok && c.start <= start && end <= c.end
    });
    match chunk {
        None => HeadDirection::NotInPhrase,
        Some(c) if c.head + 1 >= end => HeadDirection::HeadFinal,
        Some(_) => HeadDirection::HeadInitial,
    }
}

/// The `n` tokens starting at the span start, or `None` past the sentence end.
pub fn ngram_at(tokens: &[Token], start: usize, n: usize) -> Option<String> {
    (start + n <= tokens.len()).then(|| {
        tokens[start..start + n]
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    })
}

pub fn term_frequency<I, S>(terms: I) -> BTreeMap<String, usize>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut counts = BTreeMap::new();
    for t in terms {
        *counts.entry(t.into()).or_insert(0) += 1;
    }
    counts
}

/// Tokens strictly between successive non-overlapping occurrences of `term`
/// (one or more words) in `sequence`.
pub fn inter_arrival_delays<S: AsRef<str>, T: AsRef<str>>(
    sequence: &[S],
    term: &[T],
) -> Vec<usize> {
    let len = term.len();
    if len == 0 || len > sequence.len() {
        return Vec::new();
    }
    let mut positions = Vec::new();
    let mut i = 0;
    while i + len <= sequence.len() {
        if sequence[i..i + len]
            .iter()
            .zip(term)
            .all(|(a, b)| a.as_ref() == b.as_ref())
        {
            positions.push(i);
            i += len;
        } else {
            i += 1;
        }
    }
    positions.windows(2).map(|w| w[1] - w[0] - len).collect()
}
