use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnalysisUnit {
    Corpus,
    Document,
    Para,
    Sentence,
}

impl AnalysisUnit {
    pub const ALL: [AnalysisUnit; 4] = [
        AnalysisUnit::Corpus,
        AnalysisUnit::Document,
        AnalysisUnit::Para,
        AnalysisUnit::Sentence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AnalysisUnit::Corpus => "Corpus",
            AnalysisUnit::Document => "Document",
            AnalysisUnit::Para => "Para",
            AnalysisUnit::Sentence => "Sentence",
        }
    }
}

/// Syntactic unit expression: which token spans features attach to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SuExpr {
    Word,
    Phrase,
    NGram(usize),
    /// Matched against the space-joined tag sequence of a span.
    PosRegex(String),
    /// Matched against the space-joined surface text of a span.
    CharRegex(String),
    And(Box<SuExpr>, Box<SuExpr>),
    Or(Box<SuExpr>, Box<SuExpr>),
    Not(Box<SuExpr>),
}

impl SuExpr {
    /// False when the expression denotes a complement set, which cannot be
    /// enumerated on its own.
    pub fn is_positive(&self) -> bool {
        match self {
            SuExpr::Not(inner) => !inner.is_positive(),
            SuExpr::And(a, b) => a.is_positive() || b.is_positive(),
            SuExpr::Or(a, b) => a.is_positive() || b.is_positive(),
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaBlock {
    pub analysis_unit: AnalysisUnit,
    pub syntactic_unit: SuExpr,
    pub normalize_variants: bool,
}

impl Default for MetaBlock {
    fn default() -> Self {
        MetaBlock {
            analysis_unit: AnalysisUnit::Sentence,
            syntactic_unit: SuExpr::Word,
            normalize_variants: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AffixKind {
    Suffix,
    Prefix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CapitalizationMode {
    First,
    All,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ContextScope {
    Sentence,
    Para,
    Document,
}

/// Which chunk kinds head directionality looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhraseFilter {
    Any,
    Np,
    Vp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FeatureName {
    PosSequence,
    PosRegex,
    SuffixPrefix,
    Capitalization,
    SpecialChars,
    ContextWindow,
    PosContext,
    HeadDirectionality,
    NGram,
    SemanticSimilarity,
    TermFrequency,
    Bm25Weight,
    InterArrivalDelay,
}

impl FeatureName {
    pub const ALL: [FeatureName; 13] = [
        FeatureName::PosSequence,
        FeatureName::PosRegex,
        FeatureName::SuffixPrefix,
        FeatureName::Capitalization,
        FeatureName::SpecialChars,
        FeatureName::ContextWindow,
        FeatureName::PosContext,
        FeatureName::HeadDirectionality,
        FeatureName::NGram,
        FeatureName::SemanticSimilarity,
        FeatureName::TermFrequency,
        FeatureName::Bm25Weight,
        FeatureName::InterArrivalDelay,
    ];

    /// Canonical key, also used as the feature matrix column name.
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureName::PosSequence => "POS_Sequence",
            FeatureName::PosRegex => "POS_Regex",
            FeatureName::SuffixPrefix => "Suffix_Prefix",
            FeatureName::Capitalization => "Capitalization",
            FeatureName::SpecialChars => "Special_Chars",
            FeatureName::ContextWindow => "Context_Window",
            FeatureName::PosContext => "POSContext",
            FeatureName::HeadDirectionality => "Head_Directionality",
            FeatureName::NGram => "NGram",
            FeatureName::SemanticSimilarity => "Semantic_Similarity",
            FeatureName::TermFrequency => "Term_Frequency",
            FeatureName::Bm25Weight => "BM25_Weight",
            FeatureName::InterArrivalDelay => "InterArrival_Delay",
        }
    }

    /// Corpus statistics, as opposed to per-unit linguistic features.
    pub fn is_statistical(self) -> bool {
        matches!(
            self,
            FeatureName::TermFrequency | FeatureName::Bm25Weight | FeatureName::InterArrivalDelay
        )
    }
}

impl fmt::Display for FeatureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureDecl {
    PosSequence,
    PosRegex {
        pattern: String,
    },
    SuffixPrefix {
        kind: AffixKind,
        length: usize,
        /// `None` is the NULL constraint.
        pattern: Option<String>,
    },
    Capitalization {
        mode: CapitalizationMode,
    },
    SpecialChars {
        chars: Vec<char>,
    },
    ContextWindow {
        width: usize,
        scope: ContextScope,
    },
    /// Tag filter applied to the declared context window.
    PosContext {
        pattern: String,
    },
    HeadDirectionality {
        phrase: PhraseFilter,
    },
    NGram {
        n: usize,
    },
    SemanticSimilarity {
        reference: String,
    },
    TermFrequency,
    Bm25Weight,
    InterArrivalDelay {
        term: String,
    },
}

impl FeatureDecl {
    pub fn name(&self) -> FeatureName {
        match self {
            FeatureDecl::PosSequence => FeatureName::PosSequence,
            FeatureDecl::PosRegex { .. } => FeatureName::PosRegex,
            FeatureDecl::SuffixPrefix { .. } => FeatureName::SuffixPrefix,
            FeatureDecl::Capitalization { .. } => FeatureName::Capitalization,
            FeatureDecl::SpecialChars { .. } => FeatureName::SpecialChars,
            FeatureDecl::ContextWindow { .. } => FeatureName::ContextWindow,
            FeatureDecl::PosContext { .. } => FeatureName::PosContext,
            FeatureDecl::HeadDirectionality { .. } => FeatureName::HeadDirectionality,
            FeatureDecl::NGram { .. } => FeatureName::NGram,
            FeatureDecl::SemanticSimilarity { .. } => FeatureName::SemanticSimilarity,
            FeatureDecl::TermFrequency => FeatureName::TermFrequency,
            FeatureDecl::Bm25Weight => FeatureName::Bm25Weight,
            FeatureDecl::InterArrivalDelay { .. } => FeatureName::InterArrivalDelay,
        }
    }
}

/// A parsed nlpFSpL program.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub meta: MetaBlock,
    pub features: Vec<FeatureDecl>,
}

impl FeatureSpec {
    pub fn feature(&self, name: FeatureName) -> Option<&FeatureDecl> {
        self.features.iter().find(|f| f.name() == name)
    }

    pub fn has_feature(&self, name: FeatureName) -> bool {
        self.feature(name).is_some()
    }
}
