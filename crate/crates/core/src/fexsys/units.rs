//! Resolving a syntactic unit expression to token spans.
//!
//! Each leaf yields a set of `(start, end)` spans within one sentence.
//! Combinators work on exact span equality. A negated operand is kept as a
//! complement set, so `A AND NOT B` and `A OR NOT B` both denote `A \ B`:
//! the complement alone cannot be enumerated and `OR` with it is read as
//! exclusion.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::{chunk_tags, AnnotatedCorpus, Sentence, SentencePath};
use crate::lang::{anchored, SuExpr};

/// One occurrence of the syntactic unit: tokens `start..end` of a sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuInstance {
    pub path: SentencePath,
    pub start: usize,
    pub end: usize,
    pub text: String,
}

type Spans = BTreeSet<(usize, usize)>;

enum SpanSet {
    Pos(Spans),
    /// Everything except these spans.
    Neg(Spans),
}

fn leaf_spans(expr: &SuExpr, sentence: &Sentence) -> Spans {
    let n = sentence.tokens.len();
    match expr {
        SuExpr::Word => (0..n).map(|i| (i, i + 1)).collect(),
        SuExpr::NGram(k) => {
            if *k == 0 || *k > n {
                Spans::new()
            } else {
                (0..=n - k).map(|i| (i, i + k)).collect()
            }
        }
        SuExpr::Phrase => {
            let tags: Vec<&str> = sentence.tokens.iter().map(|t| t.pos.as_str()).collect();
            chunk_tags(&tags)
                .into_iter()
                .map(|c| (c.start, c.end))
                .collect()
        }
        SuExpr::PosRegex(p) => match anchored(p) {
            Ok(re) => {
                let tags: Vec<&str> = sentence.tokens.iter().map(|t| t.pos.as_str()).collect();
                crate::corpus::match_spans(&tags, &re).into_iter().collect()
            }
            Err(_) => Spans::new(),
        },
        SuExpr::CharRegex(p) => match anchored(p) {
            Ok(re) => {
                let words: Vec<&str> = sentence.tokens.iter().map(|t| t.surface.as_str()).collect();
                crate::corpus::match_spans(&words, &re)
                    .into_iter()
                    .collect()
            }
            Err(_) => Spans::new(),
        },
        SuExpr::And(..) | SuExpr::Or(..) | SuExpr::Not(..) => unreachable!("not a leaf"),
    }
}

fn eval(expr: &SuExpr, sentence: &Sentence) -> SpanSet {
    use SpanSet::{Neg, Pos};
    match expr {
        SuExpr::And(a, b) => match (eval(a, sentence), eval(b, sentence)) {
            (Pos(x), Pos(y)) => Pos(x.intersection(&y).copied().collect()),
            (Pos(x), Neg(y)) | (Neg(y), Pos(x)) => Pos(x.difference(&y).copied().collect()),
            (Neg(x), Neg(y)) => Neg(x.union(&y).copied().collect()),
        },
        SuExpr::Or(a, b) => match (eval(a, sentence), eval(b, sentence)) {
            (Pos(x), Pos(y)) => Pos(x.union(&y).copied().collect()),
            (Pos(x), Neg(y)) | (Neg(y), Pos(x)) => Pos(x.difference(&y).copied().collect()),
            (Neg(x), Neg(y)) => Neg(x.intersection(&y).copied().collect()),
        },
        SuExpr::Not(a) => match eval(a, sentence) {
            Pos(x) => Neg(x),
            Neg(x) => Pos(x),
        },
        leaf => Pos(leaf_spans(leaf, sentence)),
    }
}

/// Spans of one sentence matching `expr`, ordered by start then end.
pub fn sentence_spans(expr: &SuExpr, sentence: &Sentence) -> Vec<(usize, usize)> {
    match eval(expr, sentence) {
        SpanSet::Pos(s) => s.into_iter().collect(),
        SpanSet::Neg(_) => Vec::new(),
    }
}

/// All syntactic unit instances of a corpus in corpus order.
pub fn resolve_syntactic_units(corpus: &AnnotatedCorpus, expr: &SuExpr) -> Vec<SuInstance> {
    corpus
        .sentences()
        .flat_map(|(path, sentence)| {
            sentence_spans(expr, sentence)
                .into_iter()
                .map(move |(start, end)| SuInstance {
                    path,
                    start,
                    end,
                    text: span_text(sentence, start, end),
                })
        })
        .collect()
}

pub(crate) fn span_text(sentence: &Sentence, start: usize, end: usize) -> String {
    sentence.tokens[start..end]
        .iter()
        .map(|t| t.surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}
