//! Interpreter for the nlpFSpL feature specification language and a
//! recommender that proposes feature specifications for new text analytics
//! applications from a knowledge base of prior ones.
//!
//! The crate is split by pipeline stage:
//!
//! * [`corpus`] reads annotated text and normalizes term variants.
//! * [`lang`] parses, validates and serializes feature specifications.
//! * [`fexsys`] runs a specification over a corpus and builds a feature matrix.
//! * [`embeddings`] loads word vectors and composes BM25-weighted term vectors.
//! * [`appkb`] stores application profiles, the feature catalog and relevance scores.
//! * [`recommender`] scores application proximity and ranks catalog features.
//! * [`feedback`] turns user corrections into similarity targets and refits a PLS model.

pub mod appkb;
pub mod corpus;
pub mod embeddings;
mod error;
pub mod feedback;
pub mod fexsys;
pub mod lang;
pub mod recommender;

pub use appkb::{AnnotationLevel, ApplicationProfile, CatalogEntry, FeatureInput, KnowledgeBase};
pub use corpus::{AnnotatedCorpus, NormalizationTable, Thesaurus, Token};
pub use embeddings::{Bm25Params, Bm25Weights, EmbeddingStore, FieldEmbedding};
pub use error::{Error, Result};
pub use feedback::{
    ChangeLedger, FeedbackEvent, FeedbackMode, FeedbackOutcome, NewSimRule, SimilarityModel,
};
pub use fexsys::{build_feature_matrix, Cell, Extractor, FeatureMatrix};
pub use lang::{FeatureSpec, SpecError};
pub use recommender::{Policy, ProximityVector, RecommendationSet, Recommender};
