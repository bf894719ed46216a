use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Word vectors of one fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    dimension: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingStore {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// One `word v1 .. vd` per line. A leading `count dimension` header line,
    /// as written by word2vec tools, is skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dimension = None;
        let mut vectors = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if dimension.is_none()
                && vectors.is_empty()
                && fields.len() == 2
                && fields.iter().all(|f| f.parse::<usize>().is_ok())
            {
                continue;
            }
            if fields.len() < 2 {
                return Err(Error::parse(
                    line_no,
                    "expected a word followed by vector components",
                ));
            }
            let values = fields[1..]
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::parse(line_no, format!("invalid component {f:?}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            let dim = *dimension.get_or_insert(values.len());
            if values.len() != dim {
                return Err(Error::parse(
                    line_no,
                    format!("dimension mismatch: expected {dim}, found {}", values.len()),
                ));
            }
            vectors.insert(fields[0].to_string(), values);
        }
        match dimension {
            Some(dimension) => Ok(EmbeddingStore { dimension, vectors }),
            None => Err(Error::parse(0, "embedding file contains no vectors")),
        }
    }

    pub fn from_vectors<I, S>(vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut dimension = None;
        let mut map = HashMap::new();
        for (word, v) in vectors {
            let dim = *dimension.get_or_insert(v.len());
            if v.len() != dim || dim == 0 {
                return Err(Error::Dimension {
                    expected: dim,
                    actual: v.len(),
                });
            }
            map.insert(word.into(), v);
        }
        let dimension = dimension.ok_or_else(|| Error::parse(0, "no vectors given"))?;
        Ok(EmbeddingStore {
            dimension,
            vectors: map,
        })
    }

    /// Entries in unspecified order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.vectors.iter().map(|(w, v)| (w.as_str(), v.as_slice()))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Exact lookup, falling back to the lowercased word.
    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors
            .get(word)
            .or_else(|| self.vectors.get(&word.to_lowercase()))
            .map(Vec::as_slice)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.get(word).is_some()
    }
}
