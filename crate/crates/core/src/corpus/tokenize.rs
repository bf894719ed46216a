use super::tagger::tag_word;
use super::{AnnotatedCorpus, Document, Paragraph, Sentence, Token};

const DOC_ID: &str = "doc0";
const TERMINATORS: &[char] = &['.', '?', '!'];
/// Characters split off a word and emitted as their own tokens.
const INTERNAL_SPLITS: &[char] = &['-', '/', '–', '—'];

struct RawToken {
    text: String,
    ends_sentence: bool,
}

/// Split raw text into paragraphs (blank lines), sentences (`.?!` followed
/// by whitespace or end of input) and tokens (whitespace, with punctuation
/// detached), then tag each token.
pub fn tokenize_and_tag(text: &str) -> AnnotatedCorpus {
    let mut paragraphs = Vec::new();
    for block in paragraph_blocks(text) {
        let raw = split_raw(&block);
        let mut sentences: Vec<Sentence> = Vec::new();
        let mut current: Vec<RawToken> = Vec::new();
        for tok in raw {
            let ends = tok.ends_sentence;
            current.push(tok);
            if ends {
                push_sentence(
                    &mut sentences,
                    std::mem::take(&mut current),
                    paragraphs.len(),
                );
            }
        }
        if !current.is_empty() {
            push_sentence(&mut sentences, current, paragraphs.len());
        }
        if !sentences.is_empty() {
            paragraphs.push(Paragraph {
                index: paragraphs.len(),
                sentences,
            });
        }
    }
    if paragraphs.is_empty() {
        return AnnotatedCorpus::default();
    }
    AnnotatedCorpus {
        documents: vec![Document {
            id: DOC_ID.to_string(),
            paragraphs,
        }],
    }
}

/// Split a term or short text into word tokens using the same rules as the
/// tokenizer, dropping punctuation-only pieces.
pub fn split_words(text: &str) -> Vec<String> {
    split_raw(text)
        .into_iter()
        .map(|t| t.text)
        .filter(|t| t.chars().any(char::is_alphanumeric))
        .collect()
}

fn push_sentence(sentences: &mut Vec<Sentence>, raw: Vec<RawToken>, para_idx: usize) {
    let sent_idx = sentences.len();
    let mut tokens: Vec<Token> = Vec::with_capacity(raw.len());
    for (i, r) in raw.into_iter().enumerate() {
        let prev = tokens.last().map(|t| t.pos.as_str());
        let pos = tag_word(&r.text, i == 0, prev);
        tokens.push(Token {
            surface: r.text,
            pos,
            doc_id: DOC_ID.to_string(),
            para_idx,
            sent_idx,
            token_idx: i,
            norm_class: None,
        });
    }
    sentences.push(Sentence {
        index: sent_idx,
        tokens,
    });
}

fn paragraph_blocks(text: &str) -> Vec<String> {
    let mut blocks = Vec::new();
    let mut current = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.trim().is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
            current.clear();
        } else {
            current.push_str(line);
            current.push('\n');
        }
    }
    if !current.trim().is_empty() {
        blocks.push(current);
    }
    blocks
}

fn split_raw(text: &str) -> Vec<RawToken> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        let mut end = chars.len();
        let mut trailing = Vec::new();
        while end > start && is_detachable(chars[end - 1]) {
            trailing.push(chars[end - 1]);
            end -= 1;
        }
        trailing.reverse();
        let mut leading = Vec::new();
        while start < end && is_detachable(chars[start]) {
            leading.push(chars[start].to_string());
            start += 1;
        }

        for l in leading {
            out.push(RawToken {
                text: l,
                ends_sentence: false,
            });
        }
        let core: String = chars[start..end].iter().collect();
        let mut piece = String::new();
        for c in core.chars() {
            if INTERNAL_SPLITS.contains(&c) {
                if !piece.is_empty() {
                    out.push(RawToken {
                        text: std::mem::take(&mut piece),
                        ends_sentence: false,
                    });
                }
                out.push(RawToken {
                    text: c.to_string(),
                    ends_sentence: false,
                });
            } else {
                piece.push(c);
            }
        }
        if !piece.is_empty() {
            out.push(RawToken {
                text: piece,
                ends_sentence: false,
            });
        }
        // Runs like "..." or "?!" stay one token.
        let mut i = 0;
        while i < trailing.len() {
            let c = trailing[i];
            let mut text = c.to_string();
            while TERMINATORS.contains(&c)
                && i + 1 < trailing.len()
                && TERMINATORS.contains(&trailing[i + 1])
            {
                i += 1;
                text.push(trailing[i]);
            }
            i += 1;
            let last = i == trailing.len();
            out.push(RawToken {
                ends_sentence: last && text.chars().all(|c| TERMINATORS.contains(&c)),
                text,
            });
        }
    }
    out
}

fn is_detachable(c: char) -> bool {
    !c.is_alphanumeric() && !INTERNAL_SPLITS.contains(&c)
}
