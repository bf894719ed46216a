use serde::{Deserialize, Serialize};

use super::{Bm25Weights, EmbeddingStore};
use crate::error::{Error, Result};

/// Scalar weight applied to a word vector before composition.
pub trait WordWeights {
    fn word_weight(&self, word: &str) -> f64;
}

impl WordWeights for Bm25Weights {
    fn word_weight(&self, word: &str) -> f64 {
        self.weight(word).unwrap_or(0.0)
    }
}

/// Every word weighs 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformWeights;

impl WordWeights for UniformWeights {
    fn word_weight(&self, _word: &str) -> f64 {
        1.0
    }
}

/// `weight(w) * v(w)`, or zeros when `w` has no vector or no weight.
pub fn weighted_word_vector(
    word: &str,
    store: &EmbeddingStore,
    weights: &dyn WordWeights,
) -> Vec<f64> {
    weighted(word, store, weights).unwrap_or_else(|| vec![0.0; store.dimension()])
}

fn weighted(word: &str, store: &EmbeddingStore, weights: &dyn WordWeights) -> Option<Vec<f64>> {
    let v = store.get(word)?;
    let w = weights.word_weight(&word.to_lowercase());
    (w != 0.0).then(|| v.iter().map(|x| x * w).collect())
}

/// Mean of the weighted vectors of a term's words. Words without a vector
/// or with zero weight are left out of the mean; a term with no usable word
/// maps to zeros.
pub fn term_embedding(term: &str, store: &EmbeddingStore, weights: &dyn WordWeights) -> Vec<f64> {
    let mut sum = vec![0.0; store.dimension()];
    let mut n = 0usize;
    for word in term
        .split(|c: char| c.is_whitespace() || c == '-')
        .filter(|w| !w.is_empty())
    {
        if let Some(v) = weighted(word, store, weights) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
            n += 1;
        }
    }
    if n > 1 {
        for s in &mut sum {
            *s /= n as f64;
        }
    }
    sum
}

/// Entity, action and residual channels of one text field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldEmbedding {
    pub en: Vec<f64>,
    pub act: Vec<f64>,
    pub r: Vec<f64>,
    pub has_en: bool,
    pub has_act: bool,
    pub has_r: bool,
}

impl FieldEmbedding {
    pub fn channels(&self) -> [(&[f64], bool); 3] {
        [
            (&self.en, self.has_en),
            (&self.act, self.has_act),
            (&self.r, self.has_r),
        ]
    }
}

fn channel_sum<S: AsRef<str>>(
    terms: &[S],
    store: &EmbeddingStore,
    weights: &dyn WordWeights,
) -> Vec<f64> {
    let mut sum = vec![0.0; store.dimension()];
    for term in terms {
        for (s, x) in sum
            .iter_mut()
            .zip(term_embedding(term.as_ref(), store, weights))
        {
            *s += x;
        }
    }
    sum
}

/// Sum of term embeddings per channel. A channel is present when it has at
/// least one term, whether or not any of them has a vector.
pub fn field_embedding<S: AsRef<str>>(
    entities: &[S],
    actions: &[S],
    residual: &[S],
    store: &EmbeddingStore,
    weights: &dyn WordWeights,
) -> FieldEmbedding {
    FieldEmbedding {
        en: channel_sum(entities, store, weights),
        act: channel_sum(actions, store, weights),
        r: channel_sum(residual, store, weights),
        has_en: !entities.is_empty(),
        has_act: !actions.is_empty(),
        has_r: !residual.is_empty(),
    }
}

/// Cosine similarity; 0 when either vector is all zeros.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Dimension {
            expected: u.len(),
            actual: v.len(),
        });
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn store() -> EmbeddingStore {
        EmbeddingStore::from_vectors([
            ("x", vec![2.0, 0.0]),
            ("y", vec![0.0, 2.0]),
            ("z", vec![1.0, 1.0]),
        ])
        .unwrap()
    }

    #[test]
    fn cosine_fixtures() {
        assert_eq!(cosine(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let c = cosine(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert!((c - 0.974_631_846).abs() < 1e-9);
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 0.0);
        assert!(cosine(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn weighted_vector_scales() {
        struct Two;
        impl WordWeights for Two {
            fn word_weight(&self, _: &str) -> f64 {
                2.0
            }
        }
        let s = EmbeddingStore::from_vectors([("w", vec![1.0, 0.0])]).unwrap();
        assert_eq!(weighted_word_vector("w", &s, &Two), vec![2.0, 0.0]);
        assert_eq!(weighted_word_vector("oov", &s, &Two), vec![0.0, 0.0]);
    }

    #[test]
    fn term_embedding_is_a_mean() {
        let s = store();
        assert_eq!(term_embedding("x y", &s, &UniformWeights), vec![1.0, 1.0]);
        assert_eq!(term_embedding("x", &s, &UniformWeights), vec![2.0, 0.0]);
        assert_eq!(term_embedding("x oov", &s, &UniformWeights), vec![2.0, 0.0]);
        assert_eq!(term_embedding("oov", &s, &UniformWeights), vec![0.0, 0.0]);
    }

    #[test]
    fn absent_channels_are_flagged() {
        let s = store();
        let fe = field_embedding(&["x y"], &[], &["z"], &s, &UniformWeights);
        assert!(fe.has_en && !fe.has_act && fe.has_r);
        assert_eq!(fe.act, vec![0.0, 0.0]);
        assert_eq!(fe.en, vec![1.0, 1.0]);
    }

    proptest! {
        #[test]
        fn cosine_symmetric_and_scale_invariant(
            u in proptest::collection::vec(-10.0f64..10.0, 4),
            v in proptest::collection::vec(-10.0f64..10.0, 4),
            c in 0.01f64..100.0,
        ) {
            let a = cosine(&u, &v).unwrap();
            prop_assert_eq!(a, cosine(&v, &u).unwrap());
            let scaled: Vec<f64> = u.iter().map(|x| x * c).collect();
            prop_assert!((cosine(&scaled, &v).unwrap() - a).abs() < 1e-9);
            prop_assert!((-1.0..=1.0).contains(&a));
        }

        #[test]
        fn term_embedding_ignores_word_order(perm in Just(vec!["x", "y", "z", "x"]).prop_shuffle()) {
            let s = store();
            let a = term_embedding(&perm.join(" "), &s, &UniformWeights);
            let b = term_embedding("x x y z", &s, &UniformWeights);
            for (p, q) in a.iter().zip(&b) {
                prop_assert!((p - q).abs() < 1e-12);
            }
        }
    }
}
