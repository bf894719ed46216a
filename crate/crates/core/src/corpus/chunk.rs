//! Noun/verb phrase chunking with regular expressions over tag sequences.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChunkKind {
    Np,
    Vp,
}

/// A phrase chunk over token positions `start..end` of one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub kind: ChunkKind,
    pub start: usize,
    pub end: usize,
    /// Last noun of an NP, first verb of a VP.
    pub head: usize,
}

const NP_PATTERN: &str =
    r"(?:DT |PDT |PRP\$ )?(?:(?:JJ|JJR|JJS|NN|NNS|NNP|NNPS|AFX|HYPH|CD) )*(?:NN|NNS|NNP|NNPS)";
const VP_PATTERN: &str = r"(?:MD )?VB[DGNPZ]?(?: (?:RB )?VB[DGNPZ]?)*";

fn np_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(&format!("^(?:{NP_PATTERN})$")).expect("static pattern"))
}

fn vp_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(&format!("^(?:{VP_PATTERN})$")).expect("static pattern"))
}

pub(crate) fn is_noun(tag: &str) -> bool {
    matches!(tag, "NN" | "NNS" | "NNP" | "NNPS")
}

pub(crate) fn is_verb(tag: &str) -> bool {
    matches!(tag, "VB" | "VBD" | "VBG" | "VBN" | "VBP" | "VBZ")
}

/// Leftmost-longest, non-overlapping spans whose space-joined items fully
/// match `anchored` (a regex already wrapped in `^(?:..)$`).
pub(crate) fn match_spans<S: AsRef<str>>(items: &[S], anchored: &Regex) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut i = 0;
    while i < items.len() {
        if let Some(end) = longest_match_from(items, anchored, i) {
            spans.push((i, end));
            i = end;
        } else {
            i += 1;
        }
    }
    spans
}

fn longest_match_from<S: AsRef<str>>(items: &[S], anchored: &Regex, start: usize) -> Option<usize> {
    let mut joined = String::new();
    let mut best = None;
    for (j, item) in items.iter().enumerate().skip(start) {
        if j > start {
            joined.push(' ');
        }
        joined.push_str(item.as_ref());
        if anchored.is_match(&joined) {
            best = Some(j + 1);
        }
    }
    best
}

/// Chunk a sentence's tag sequence into maximal NP and VP spans.
pub fn chunk_tags<S: AsRef<str>>(tags: &[S]) -> Vec<Chunk> {
    let mut chunks = Vec::new();
    let mut i = 0;
    while i < tags.len() {
        let np = longest_match_from(tags, np_regex(), i);
        let vp = longest_match_from(tags, vp_regex(), i);
        let (kind, end) = match (np, vp) {
            (Some(a), Some(b)) if b > a => (ChunkKind::Vp, b),
            (Some(a), _) => (ChunkKind::Np, a),
            (None, Some(b)) => (ChunkKind::Vp, b),
            (None, None) => {
                i += 1;
                continue;
            }
        };
        let head = match kind {
            ChunkKind::Np => (i..end).rev().find(|&k| is_noun(tags[k].as_ref())),
            ChunkKind::Vp => (i..end).find(|&k| is_verb(tags[k].as_ref())),
        }
        .expect("chunk patterns require a head");
        chunks.push(Chunk {
            kind,
            start: i,
            end,
            head,
        });
        i = end;
    }
    chunks
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SENTENCE_ONE: [&str; 12] = [
        "DT", "JJ", "AFX", "HYPH", "JJ", "NN", "NN", "IN", "DT", "JJ", "NN", ".",
    ];

    #[test]
    fn chunks_first_sentence() {
        let chunks = chunk_tags(&SENTENCE_ONE);
        assert_eq!(
            chunks,
            vec![
                Chunk {
                    kind: ChunkKind::Np,
                    start: 0,
                    end: 7,
                    head: 6
                },
                Chunk {
                    kind: ChunkKind::Np,
                    start: 8,
                    end: 11,
                    head: 10
                },
            ]
        );
    }

    #[test]
    fn verb_phrase_head_is_first_verb() {
        let chunks = chunk_tags(&["NN", "VBZ", "RB", "VBN", "."]);
        assert_eq!(
            chunks[1],
            Chunk {
                kind: ChunkKind::Vp,
                start: 1,
                end: 4,
                head: 1
            }
        );
    }

    #[test]
    fn adjective_plural_noun() {
        let chunks = chunk_tags(&["VB", "JJ", "NNS"]);
        assert_eq!(chunks.len(), 2);
        assert_eq!(
            (chunks[0].kind, chunks[0].start, chunks[0].end),
            (ChunkKind::Vp, 0, 1)
        );
        assert_eq!(
            (chunks[1].kind, chunks[1].start, chunks[1].end),
            (ChunkKind::Np, 1, 3)
        );
    }

    #[test]
    fn no_chunks_without_heads() {
        assert!(chunk_tags(&["DT", "IN", "CC", "."]).is_empty());
    }

    proptest! {
        #[test]
        fn chunks_are_ordered_disjoint_and_headed(
            tags in proptest::collection::vec(
                proptest::sample::select(vec!["DT", "JJ", "NN", "NNS", "VB", "VBZ", "RB", "IN", ".", "MD", "HYPH"]),
                0..20,
            )
        ) {
            let chunks = chunk_tags(&tags);
            let mut last_end = 0;
            for c in &chunks {
                prop_assert!(c.start >= last_end);
                prop_assert!(c.start < c.end && c.end <= tags.len());
                prop_assert!(c.head >= c.start && c.head < c.end);
                last_end = c.end;
            }
        }
    }
}
