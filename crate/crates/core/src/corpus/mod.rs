//! Annotated text at corpus, document, paragraph, sentence and token level.

mod chunk;
mod conll;
mod normalize;
mod tagger;
mod tokenize;

pub use chunk::{chunk_tags, Chunk, ChunkKind};
pub(crate) use chunk::{is_verb, match_spans};
pub use conll::{load_conll, parse_conll, write_conll};
pub use normalize::{build_normalization, NormalizationTable, Thesaurus};
pub use tagger::{is_auxiliary, lemmatize_verb, tag_word};
pub use tokenize::{split_words, tokenize_and_tag};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    /// Penn Treebank tag.
    pub pos: String,
    pub doc_id: String,
    pub para_idx: usize,
    pub sent_idx: usize,
    /// Position within the sentence.
    pub token_idx: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_class: Option<String>,
}

impl Token {
    /// True when the surface carries no letter or digit.
    pub fn is_punctuation(&self) -> bool {
        !self.surface.chars().any(char::is_alphanumeric)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub index: usize,
    pub tokens: Vec<Token>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paragraph {
    pub index: usize,
    pub sentences: Vec<Sentence>,
}

impl Paragraph {
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flat_map(|s| s.tokens.iter())
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(|s| s.tokens.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub paragraphs: Vec<Paragraph>,
}

impl Document {
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.paragraphs.iter().flat_map(|p| p.tokens())
    }

    pub fn token_count(&self) -> usize {
        self.paragraphs.iter().map(Paragraph::token_count).sum()
    }
}

/// Position of a sentence inside a corpus, as indices into the nested vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SentencePath {
    pub doc: usize,
    pub para: usize,
    pub sent: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedCorpus {
    pub documents: Vec<Document>,
}

impl AnnotatedCorpus {
    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Tokens in global (document, paragraph, sentence, token) order.
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.documents.iter().flat_map(|d| d.tokens())
    }

    pub fn token_count(&self) -> usize {
        self.documents.iter().map(Document::token_count).sum()
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences().count()
    }

    pub fn sentences(&self) -> impl Iterator<Item = (SentencePath, &Sentence)> {
        self.documents.iter().enumerate().flat_map(|(d, doc)| {
            doc.paragraphs
                .iter()
                .enumerate()
                .flat_map(move |(p, para)| {
                    para.sentences.iter().enumerate().map(move |(s, sent)| {
                        (
                            SentencePath {
                                doc: d,
                                para: p,
                                sent: s,
                            },
                            sent,
                        )
                    })
                })
        })
    }

    pub fn sentence(&self, path: SentencePath) -> &Sentence {
        &self.documents[path.doc].paragraphs[path.para].sentences[path.sent]
    }

    pub fn paragraph(&self, path: SentencePath) -> &Paragraph {
        &self.documents[path.doc].paragraphs[path.para]
    }

    pub fn document(&self, path: SentencePath) -> &Document {
        &self.documents[path.doc]
    }
}
