//! Entity, action and residual terms of a free-text field.

use serde::{Deserialize, Serialize};

use crate::corpus::{
    chunk_tags, is_auxiliary, is_verb, lemmatize_verb, tokenize_and_tag, ChunkKind, Thesaurus,
    Token,
};

/// Noun phrases, main-verb lemmas and the remaining words of a text. Every
/// word token lands in exactly one of the three lists.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyTerms {
    pub entities: Vec<String>,
    pub actions: Vec<String>,
    pub residual: Vec<String>,
}

impl KeyTerms {
    /// Every word across the three lists, hyphenated forms split, in list order.
    pub fn words(&self) -> Vec<String> {
        self.entities
            .iter()
            .chain(&self.actions)
            .chain(&self.residual)
            .flat_map(|t| {
                t.split(|c: char| c.is_whitespace() || c == '-')
                    .filter(|w| !w.is_empty())
                    .map(str::to_string)
                    .collect::<Vec<_>>()
            })
            .collect()
    }
}

fn is_article(t: &Token) -> bool {
    matches!(t.surface.to_lowercase().as_str(), "a" | "an" | "the")
}

fn is_hyphen(t: &Token) -> bool {
    t.pos == "HYPH" || t.surface == "-"
}

/// Lowercased surface forms with hyphens glued to their neighbours.
fn render_phrase(tokens: &[Token]) -> Vec<String> {
    let mut words: Vec<String> = Vec::new();
    let mut glue = false;
    for t in tokens {
        let w = t.surface.to_lowercase();
        if is_hyphen(t) {
            match words.last_mut() {
                Some(last) => last.push('-'),
                None => words.push("-".into()),
            }
            glue = true;
        } else if glue && !words.is_empty() {
            words.last_mut().expect("checked").push_str(&w);
            glue = false;
        } else {
            words.push(w);
        }
    }
    words
}

fn substitute(words: Vec<String>, thesaurus: Option<&Thesaurus>) -> Vec<String> {
    match thesaurus {
        Some(t) if !t.is_empty() => t.substitute_words(&words),
        _ => words,
    }
}

/// Tag and chunk `text`; noun-phrase chunks become entity terms, non-auxiliary
/// verbs in verb-phrase chunks become base-form actions.
pub fn extract_key_terms(text: &str, thesaurus: Option<&Thesaurus>) -> KeyTerms {
    let corpus = tokenize_and_tag(text);
    let mut out = KeyTerms::default();
    for (_, sentence) in corpus.sentences() {
        let tags: Vec<&str> = sentence.tokens.iter().map(|t| t.pos.as_str()).collect();
        let mut taken = vec![false; tags.len()];
        for chunk in chunk_tags(&tags) {
            match chunk.kind {
                ChunkKind::Np => {
                    // articles carry no content; demonstratives stay in the term
                    let start = if is_article(&sentence.tokens[chunk.start]) {
                        chunk.start + 1
                    } else {
                        chunk.start
                    };
                    let words =
                        substitute(render_phrase(&sentence.tokens[start..chunk.end]), thesaurus);
                    out.entities.push(words.join(" "));
                    taken[start..chunk.end].iter_mut().for_each(|t| *t = true);
                }
                ChunkKind::Vp =>
                {
                    #[allow(clippy::needless_range_loop)]
                    for i in chunk.start..chunk.end {
                        let tok = &sentence.tokens[i];
                        if !is_verb(&tok.pos) {
                            continue;
                        }
                        let lemma = lemmatize_verb(&tok.surface);
                        if is_auxiliary(&lemma) {
                            continue;
                        }
                        out.actions.extend(substitute(vec![lemma], thesaurus));
                        taken[i] = true;
                    }
                }
            }
        }
        let rest: Vec<String> = sentence
            .tokens
            .iter()
            .zip(&taken)
            .filter(|(t, taken)| !**taken && !t.is_punctuation())
            .map(|(t, _)| t.surface.to_lowercase())
            .collect();
        out.residual.extend(substitute(rest, thesaurus));
    }
    out
}
