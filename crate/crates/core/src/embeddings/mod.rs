//! Pre-trained word vectors, BM25 word weights and their composition into
//! term and field embeddings.

mod bm25;
mod compose;
mod store;

pub use bm25::{Bm25Params, Bm25Weights};
pub use compose::{
    cosine, field_embedding, term_embedding, weighted_word_vector, FieldEmbedding, UniformWeights,
    WordWeights,
};
pub use store::EmbeddingStore;
