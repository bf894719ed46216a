//! Five-column TAB annotation format:
//! `doc_id  para_idx  sent_idx  surface  pos`, one token per line, with a
//! blank line closing each sentence. Extra columns are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use super::{AnnotatedCorpus, Document, Paragraph, Sentence, Token};
use crate::error::{Error, Result};

pub fn load_conll(path: impl AsRef<Path>) -> Result<AnnotatedCorpus> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_conll(&text)
}

pub fn parse_conll(text: &str) -> Result<AnnotatedCorpus> {
    let mut corpus = AnnotatedCorpus::default();
    let mut seen_docs: HashSet<String> = HashSet::new();
    let mut sentence_closed = true;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            sentence_closed = true;
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 5 {
            return Err(Error::parse(
                line_no,
                format!("expected 5 TAB-separated columns, found {}", cols.len()),
            ));
        }
        let doc_id = cols[0].trim();
        let para_idx = parse_index(cols[1], "para_idx", line_no)?;
        let sent_idx = parse_index(cols[2], "sent_idx", line_no)?;
        let surface = cols[3];
        let pos = cols[4].trim();
        if doc_id.is_empty() {
            return Err(Error::parse(line_no, "empty doc_id"));
        }
        if surface.is_empty() {
            return Err(Error::parse(line_no, "empty surface form"));
        }
        if pos.is_empty() {
            return Err(Error::parse(line_no, "empty POS tag"));
        }

        let new_doc = corpus.documents.last().map_or(true, |d| d.id != doc_id);
        if new_doc {
            if !seen_docs.insert(doc_id.to_string()) {
                return Err(structure(
                    line_no,
                    format!("document {doc_id:?} reappears after another document"),
                ));
            }
            corpus.documents.push(Document {
                id: doc_id.to_string(),
                paragraphs: Vec::new(),
            });
        }
        let doc = corpus.documents.last_mut().expect("document pushed above");

        let para_changed = match doc.paragraphs.last() {
            None => true,
            Some(p) if p.index == para_idx => false,
            Some(p) if p.index > para_idx => {
                return Err(structure(
                    line_no,
                    format!("paragraph index {para_idx} after {}", p.index),
                ))
            }
            Some(_) => true,
        };
        if para_changed {
            doc.paragraphs.push(Paragraph {
                index: para_idx,
                sentences: Vec::new(),
            });
        }
        let para = doc.paragraphs.last_mut().expect("paragraph pushed above");

        let sent_changed = match para.sentences.last() {
            None => true,
            Some(s) if s.index == sent_idx => {
                if sentence_closed {
                    return Err(structure(
                        line_no,
                        format!("sentence index {sent_idx} reused after a blank line"),
                    ));
                }
                false
            }
            Some(s) if s.index > sent_idx => {
                return Err(structure(
                    line_no,
                    format!("sentence index {sent_idx} after {}", s.index),
                ))
            }
            Some(_) => true,
        };
        if sent_changed {
            para.sentences.push(Sentence {
                index: sent_idx,
                tokens: Vec::new(),
            });
        }
        let sentence = para.sentences.last_mut().expect("sentence pushed above");
        let token_idx = sentence.tokens.len();
        sentence.tokens.push(Token {
            surface: surface.to_string(),
            pos: pos.to_string(),
            doc_id: doc_id.to_string(),
            para_idx,
            sent_idx,
            token_idx,
            norm_class: None,
        });
        sentence_closed = false;
    }

    Ok(corpus)
}

/// Serialize a corpus back into the five-column format.
pub fn write_conll(corpus: &AnnotatedCorpus) -> String {
    let mut out = String::new();
    for doc in &corpus.documents {
        for para in &doc.paragraphs {
            for sent in &para.sentences {
                for tok in &sent.tokens {
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}",
                        doc.id, para.index, sent.index, tok.surface, tok.pos
                    );
                }
                out.push('\n');
            }
        }
    }
    out
}

fn parse_index(raw: &str, what: &str, line: usize) -> Result<usize> {
    raw.trim().parse().map_err(|_| {
        Error::parse(
            line,
            format!("{what} must be a non-negative integer, got {raw:?}"),
        )
    })
}

fn structure(line: usize, message: String) -> Error {
    Error::Structure { line, message }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SENTENCE_ONE: &str = "\
d1\t0\t0\tThis\tDT
d1\t0\t0\tXYZ\tJJ
d1\t0\t0\tnon\tAFX
d1\t0\t0\t-\tHYPH
d1\t0\t0\tinterventional\tJJ
d1\t0\t0\tstudy\tNN
d1\t0\t0\treport\tNN
d1\t0\t0\tfrom\tIN
d1\t0\t0\ta\tDT
d1\t0\t0\tmedical\tJJ
d1\t0\t0\tprofessional\tNN
d1\t0\t0\t.\t.
";

    #[test]
    fn twelve_token_sentence() {
        let corpus = parse_conll(SENTENCE_ONE).unwrap();
        assert_eq!(corpus.documents.len(), 1);
        assert_eq!(corpus.documents[0].paragraphs.len(), 1);
        assert_eq!(corpus.sentence_count(), 1);
        assert_eq!(corpus.token_count(), 12);
        let tags: Vec<&str> = corpus.tokens().map(|t| t.pos.as_str()).collect();
        assert_eq!(
            tags,
            ["DT", "JJ", "AFX", "HYPH", "JJ", "NN", "NN", "IN", "DT", "JJ", "NN", "."]
        );
        assert_eq!(corpus.tokens().last().unwrap().token_idx, 11);
    }

    #[test]
    fn empty_input() {
        assert!(parse_conll("").unwrap().is_empty());
        assert!(parse_conll("\n\n").unwrap().is_empty());
    }

    #[test]
    fn document_change_resets_structure() {
        let text =
            "a\t0\t0\tx\tNN\na\t0\t0\ty\tNN\n\na\t0\t1\tz\tNN\nb\t0\t0\tu\tNN\nb\t1\t0\tv\tNN\n";
        let corpus = parse_conll(text).unwrap();
        assert_eq!(corpus.documents.len(), 2);
        assert_eq!(corpus.documents[0].paragraphs[0].sentences.len(), 2);
        assert_eq!(corpus.documents[1].paragraphs.len(), 2);
        assert_eq!(
            corpus.documents[1].paragraphs[1].sentences[0].tokens[0].token_idx,
            0
        );
        assert_eq!(corpus.token_count(), 5);
    }

    #[test]
    fn extra_columns_are_ignored() {
        let corpus = parse_conll("d\t0\t0\tword\tNN\textra\tmore\n").unwrap();
        assert_eq!(corpus.tokens().next().unwrap().pos, "NN");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_conll("d\t0\t0\tok\tNN\nd\t0\tbroken\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_conll("d\tx\t0\tok\tNN\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn non_monotone_indices_are_rejected() {
        let err = parse_conll("d\t1\t0\ta\tNN\nd\t0\t0\tb\tNN\n").unwrap_err();
        assert!(matches!(err, Error::Structure { line: 2, .. }));
        let err = parse_conll("d\t0\t2\ta\tNN\nd\t0\t1\tb\tNN\n").unwrap_err();
        assert!(matches!(err, Error::Structure { line: 2, .. }));
        let err = parse_conll("d\t0\t0\ta\tNN\n\nd\t0\t0\tb\tNN\n").unwrap_err();
        assert!(matches!(err, Error::Structure { line: 3, .. }));
        let err = parse_conll("d\t0\t0\ta\tNN\ne\t0\t0\tb\tNN\nd\t0\t1\tc\tNN\n").unwrap_err();
        assert!(matches!(err, Error::Structure { line: 3, .. }));
    }

    #[test]
    fn writes_back_the_same_text() {
        let text = format!("{SENTENCE_ONE}\n");
        let corpus = parse_conll(&text).unwrap();
        assert_eq!(write_conll(&corpus), text);
    }
}
