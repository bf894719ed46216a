//! Runs a feature specification over an annotated corpus.

mod features;
mod matrix;
mod units;

pub use features::{
    affix, capitalization, context_window, head_directionality, inter_arrival_delays, ngram_at,
    pos_regex_matches, pos_sequence, special_chars, term_frequency, HeadDirection, Layout,
};
pub use matrix::{Cell, FeatureMatrix, IDENTITY_COLUMNS};
pub use units::{resolve_syntactic_units, sentence_spans, SuInstance};

use rayon::prelude::*;
use regex::Regex;

use crate::corpus::{
    build_normalization, chunk_tags, AnnotatedCorpus, NormalizationTable, Sentence, SentencePath,
    Thesaurus,
};
use crate::embeddings::{
    cosine, term_embedding, Bm25Params, Bm25Weights, EmbeddingStore, UniformWeights,
};
use crate::error::{Error, Result};
use crate::lang::{
    anchored, validate, AffixKind, AnalysisUnit, CapitalizationMode, ContextScope, FeatureDecl,
    FeatureName, FeatureSpec, PhraseFilter,
};

enum Plan {
    PosSequence,
    PosRegex(Regex),
    Affix {
        kind: AffixKind,
        length: usize,
        pattern: Option<Regex>,
    },
    Capitalization(CapitalizationMode),
    SpecialChars(Vec<char>),
    Context {
        width: usize,
        scope: ContextScope,
    },
    PosContext {
        width: usize,
        scope: ContextScope,
        pattern: Regex,
    },
    Head(PhraseFilter),
    NGram(usize),
    Semantic(Vec<f64>),
    TermFrequency,
    Bm25,
    Delay,
}

impl Plan {
    fn is_statistical(&self) -> bool {
        matches!(self, Plan::TermFrequency | Plan::Bm25 | Plan::Delay)
    }
}

/// Corpus statistics for one document, or for the whole corpus.
#[derive(Default)]
struct UnitStats {
    tf: Option<Cell>,
    bm25: Option<Cell>,
    delay: Option<Cell>,
}

fn compile_error(name: FeatureName, e: regex::Error) -> Error {
    Error::Extraction {
        feature: name.to_string(),
        message: e.to_string(),
    }
}

/// Configured interpreter for one specification.
///
/// ```
/// use fspl_core::{corpus::tokenize_and_tag, fexsys::Extractor, lang::parse};
///
/// let spec = parse("POS_Sequence := YES").unwrap();
/// let matrix = Extractor::new(&spec).run(&tokenize_and_tag("Dog runs.")).unwrap();
/// assert_eq!(matrix.n_rows(), 3);
/// ```
pub struct Extractor<'a> {
    spec: &'a FeatureSpec,
    embeddings: Option<&'a EmbeddingStore>,
    thesaurus: Option<&'a Thesaurus>,
    bm25: Bm25Params,
}

impl<'a> Extractor<'a> {
    pub fn new(spec: &'a FeatureSpec) -> Self {
        Extractor {
            spec,
            embeddings: None,
            thesaurus: None,
            bm25: Bm25Params::default(),
        }
    }

    pub fn with_embeddings(mut self, store: &'a EmbeddingStore) -> Self {
        self.embeddings = Some(store);
        self
    }

    pub fn with_thesaurus(mut self, thesaurus: &'a Thesaurus) -> Self {
        self.thesaurus = Some(thesaurus);
        self
    }

    pub fn with_bm25_params(mut self, params: Bm25Params) -> Self {
        self.bm25 = params;
        self
    }

    pub fn columns(&self) -> Vec<String> {
        IDENTITY_COLUMNS
            .iter()
            .map(|s| s.to_string())
            .chain(self.spec.features.iter().map(|f| f.name().to_string()))
            .collect()
    }

    fn plan(&self) -> Result<Vec<Plan>> {
        let window = self.spec.features.iter().find_map(|f| match f {
            FeatureDecl::ContextWindow { width, scope } => Some((*width, *scope)),
            _ => None,
        });
        self.spec
            .features
            .iter()
            .map(|decl| {
                let name = decl.name();
                let re = |p: &str| anchored(p).map_err(|e| compile_error(name, e));
                Ok(match decl {
                    FeatureDecl::PosSequence => Plan::PosSequence,
                    FeatureDecl::PosRegex { pattern } => Plan::PosRegex(re(pattern)?),
                    FeatureDecl::SuffixPrefix {
                        kind,
                        length,
                        pattern,
                    } => Plan::Affix {
                        kind: *kind,
                        length: *length,
                        pattern: pattern.as_deref().map(re).transpose()?,
                    },
                    FeatureDecl::Capitalization { mode } => Plan::Capitalization(*mode),
                    FeatureDecl::SpecialChars { chars } => Plan::SpecialChars(chars.clone()),
                    FeatureDecl::ContextWindow { width, scope } => Plan::Context {
                        width: *width,
                        scope: *scope,
                    },
                    FeatureDecl::PosContext { pattern } => {
                        let (width, scope) = window.ok_or_else(|| Error::Extraction {
                            feature: name.to_string(),
                            message: "requires Context_Window".into(),
                        })?;
                        Plan::PosContext {
                            width,
                            scope,
                            pattern: re(pattern)?,
                        }
                    }
                    FeatureDecl::HeadDirectionality { phrase } => Plan::Head(*phrase),
                    FeatureDecl::NGram { n } => Plan::NGram(*n),
                    FeatureDecl::SemanticSimilarity { reference } => {
                        let store = self.embeddings.ok_or_else(|| Error::Extraction {
                            feature: name.to_string(),
                            message: "no embeddings loaded".into(),
                        })?;
                        Plan::Semantic(term_embedding(reference, store, &UniformWeights))
                    }
                    FeatureDecl::TermFrequency => Plan::TermFrequency,
                    FeatureDecl::Bm25Weight => Plan::Bm25,
                    FeatureDecl::InterArrivalDelay { .. } => Plan::Delay,
                })
            })
            .collect()
    }

    pub fn run(&self, corpus: &AnnotatedCorpus) -> Result<FeatureMatrix> {
        if let Some(d) = validate(self.spec).into_iter().next() {
            return Err(Error::Extraction {
                feature: d
                    .feature
                    .map_or_else(|| "spec".to_string(), |f| f.to_string()),
                message: d.message,
            });
        }
        let plan = self.plan()?;
        let columns = self.columns();
        let stats = self.unit_stats(corpus, &plan);
        let au = self.spec.meta.analysis_unit;
        let stat_unit = |doc: usize| if au == AnalysisUnit::Corpus { 0 } else { doc };

        let rows = if plan.iter().all(Plan::is_statistical) {
            self.statistic_rows(corpus, &plan, &stats)
        } else {
            let layout = Layout::new(corpus);
            let sentences: Vec<(SentencePath, &Sentence)> = corpus.sentences().collect();
            let per_sentence = sentences
                .par_iter()
                .map(|(path, sentence)| {
                    self.sentence_rows(
                        corpus,
                        &layout,
                        &plan,
                        *path,
                        sentence,
                        stats.get(stat_unit(path.doc)..).unwrap_or(&[]),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            per_sentence.into_iter().flatten().collect()
        };
        Ok(FeatureMatrix { columns, rows })
    }

    fn term_key<'t>(&self, table: Option<&'t NormalizationTable>) -> impl Fn(&str) -> String + 't {
        move |surface: &str| match table {
            Some(t) => t.normalize(surface),
            None => surface.to_lowercase(),
        }
    }

    fn unit_stats(&self, corpus: &AnnotatedCorpus, plan: &[Plan]) -> Vec<UnitStats> {
        if !plan.iter().any(Plan::is_statistical) {
            return Vec::new();
        }
        let table = self
            .spec
            .meta
            .normalize_variants
            .then(|| build_normalization(corpus, self.thesaurus));
        let key = self.term_key(table.as_ref());

        // every token keyed, for positions; words only, for counting
        let sequences: Vec<Vec<(String, bool)>> = corpus
            .documents
            .iter()
            .map(|d| {
                d.tokens()
                    .map(|t| (key(&t.surface), t.is_punctuation()))
                    .collect()
            })
            .collect();
        let words: Vec<Vec<String>> = sequences
            .iter()
            .map(|s| {
                s.iter()
                    .filter(|(_, p)| !p)
                    .map(|(k, _)| k.clone())
                    .collect()
            })
            .collect();
        let bm25 = Bm25Weights::from_documents(&words, self.bm25);
        let delay_term: Vec<String> = self
            .spec
            .features
            .iter()
            .find_map(|f| match f {
                FeatureDecl::InterArrivalDelay { term } => {
                    Some(term.split_whitespace().map(&key).collect())
                }
                _ => None,
            })
            .unwrap_or_default();

        let stats_for = |seq: &[(String, bool)], words: &[String], bm25_cell: Option<Cell>| {
            let mut s = UnitStats::default();
            for p in plan {
                match p {
                    Plan::TermFrequency => {
                        s.tf = Some(Cell::List(
                            term_frequency(words.iter().cloned())
                                .into_iter()
                                .map(|(t, n)| Cell::Text(format!("{t}:{n}")))
                                .collect(),
                        ))
                    }
                    Plan::Delay => {
                        let keys: Vec<&str> = seq.iter().map(|(k, _)| k.as_str()).collect();
                        s.delay = Some(Cell::List(
                            inter_arrival_delays(&keys, &delay_term)
                                .into_iter()
                                .map(Cell::index)
                                .collect(),
                        ))
                    }
                    _ => {}
                }
            }
            s.bm25 = bm25_cell;
            s
        };
        let wants_bm25 = plan.iter().any(|p| matches!(p, Plan::Bm25));
        let weight_list = |pairs: Vec<(String, f64)>| {
            Cell::List(
                pairs
                    .into_iter()
                    .map(|(t, w)| Cell::Text(format!("{t}:{w:.6}")))
                    .collect(),
            )
        };

        if self.spec.meta.analysis_unit == AnalysisUnit::Corpus {
            let seq: Vec<(String, bool)> = sequences.concat();
            let all_words: Vec<String> = words.concat();
            let cell = wants_bm25
                .then(|| weight_list(bm25.iter().map(|(t, w)| (t.to_string(), w)).collect()));
            vec![stats_for(&seq, &all_words, cell)]
        } else {
            sequences
                .iter()
                .zip(&words)
                .map(|(seq, doc_words)| {
                    let cell = wants_bm25.then(|| {
                        let len = doc_words.len();
                        weight_list(
                            term_frequency(doc_words.iter().cloned())
                                .into_iter()
                                .map(|(t, n)| {
                                    let w = bm25.score(&t, n, len);
                                    (t, w)
                                })
                                .collect(),
                        )
                    });
                    stats_for(seq, doc_words, cell)
                })
                .collect()
        }
    }

    fn statistic_cells(plan: &[Plan], stats: &UnitStats) -> Vec<Cell> {
        plan.iter()
            .map(|p| {
                match p {
                    Plan::TermFrequency => stats.tf.clone(),
                    Plan::Bm25 => stats.bm25.clone(),
                    Plan::Delay => stats.delay.clone(),
                    _ => None,
                }
                .unwrap_or(Cell::Empty)
            })
            .collect()
    }

    fn statistic_rows(
        &self,
        corpus: &AnnotatedCorpus,
        plan: &[Plan],
        stats: &[UnitStats],
    ) -> Vec<Vec<Cell>> {
        if corpus.is_empty() {
            return Vec::new();
        }
        let blank = || vec![Cell::Empty; 4];
        if self.spec.meta.analysis_unit == AnalysisUnit::Corpus {
            let mut row = vec![Cell::text("corpus"), Cell::Empty];
            row.extend(blank());
            row.extend(Self::statistic_cells(plan, &stats[0]));
            return vec![row];
        }
        corpus
            .documents
            .iter()
            .zip(stats)
            .map(|(doc, s)| {
                let mut row = vec![Cell::text(doc.id.clone()), Cell::text(doc.id.clone())];
                row.extend(blank());
                row.extend(Self::statistic_cells(plan, s));
                row
            })
            .collect()
    }

    fn sentence_rows(
        &self,
        corpus: &AnnotatedCorpus,
        layout: &Layout<'_>,
        plan: &[Plan],
        path: SentencePath,
        sentence: &Sentence,
        stats: &[UnitStats],
    ) -> Result<Vec<Vec<Cell>>> {
        let doc = corpus.document(path);
        let para = corpus.paragraph(path);
        let chunks = plan.iter().any(|p| matches!(p, Plan::Head(_))).then(|| {
            chunk_tags(
                &sentence
                    .tokens
                    .iter()
                    .map(|t| t.pos.as_str())
                    .collect::<Vec<_>>(),
            )
        });

        let mut rows = Vec::new();
        for (start, end) in sentence_spans(&self.spec.meta.syntactic_unit, sentence) {
            let tokens = &sentence.tokens[start..end];
            let text = units::span_text(sentence, start, end);
            let mut row = vec![
                Cell::text(text.clone()),
                Cell::text(doc.id.clone()),
                Cell::index(para.index),
                Cell::index(sentence.index),
                Cell::index(start),
                Cell::index(end),
            ];
            for p in plan {
                let cell = match p {
                    Plan::PosSequence => Cell::Text(pos_sequence(tokens)),
                    Plan::PosRegex(re) => Cell::Bool(pos_regex_matches(tokens, re)),
                    Plan::Affix {
                        kind,
                        length,
                        pattern,
                    } => Cell::Text(affix(&text, *kind, *length, pattern.as_ref())),
                    Plan::Capitalization(mode) => Cell::Bool(capitalization(&text, *mode)),
                    Plan::SpecialChars(chars) => Cell::List(
                        special_chars(&text, chars)
                            .into_iter()
                            .map(Cell::Bool)
                            .collect(),
                    ),
                    Plan::Context { width, scope } => Cell::List(
                        layout
                            .context(path, start, end, *width, *scope)
                            .into_iter()
                            .map(|t| Cell::text(t.surface.clone()))
                            .collect(),
                    ),
                    Plan::PosContext {
                        width,
                        scope,
                        pattern,
                    } => Cell::List(
                        layout
                            .context(path, start, end, *width, *scope)
                            .into_iter()
                            .filter(|t| pattern.is_match(&t.pos))
                            .map(|t| Cell::text(t.surface.clone()))
                            .collect(),
                    ),
                    Plan::Head(filter) => Cell::text(
                        head_directionality(
                            chunks.as_deref().unwrap_or_default(),
                            start,
                            end,
                            *filter,
                        )
                        .as_str(),
                    ),
                    Plan::NGram(n) => {
                        ngram_at(&sentence.tokens, start, *n).map_or(Cell::Empty, Cell::Text)
                    }
                    Plan::Semantic(reference) => {
                        let store = self.embeddings.expect("checked when planning");
                        let v = term_embedding(&text, store, &UniformWeights);
                        Cell::Number(cosine(&v, reference)?)
                    }
                    Plan::TermFrequency => stats
                        .first()
                        .and_then(|s| s.tf.clone())
                        .unwrap_or(Cell::Empty),
                    Plan::Bm25 => stats
                        .first()
                        .and_then(|s| s.bm25.clone())
                        .unwrap_or(Cell::Empty),
                    Plan::Delay => stats
                        .first()
                        .and_then(|s| s.delay.clone())
                        .unwrap_or(Cell::Empty),
                };
                row.push(cell);
            }
            rows.push(row);
        }
        Ok(rows)
    }
}

/// Run `spec` over `corpus` without embeddings or thesaurus.
pub fn build_feature_matrix(corpus: &AnnotatedCorpus, spec: &FeatureSpec) -> Result<FeatureMatrix> {
    Extractor::new(spec).run(corpus)
}
