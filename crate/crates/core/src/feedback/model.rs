use serde::{Deserialize, Serialize};

use super::pls::PlsModel;
use crate::error::Result;

/// Learned replacement for the mean-of-components similarity.
///
/// Keeps every training pair seen so far; each refit runs from scratch over
/// the whole archive, so a refit equals a fresh fit on the same pairs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimilarityModel {
    pls: Option<PlsModel>,
    archive: Vec<(Vec<f64>, f64)>,
    components: Option<usize>,
    version: u64,
}

impl SimilarityModel {
    /// Unfitted model seeded with existing pairwise proximities between
    /// knowledge-base applications.
    pub fn bootstrap(samples: Vec<(Vec<f64>, f64)>) -> Self {
        SimilarityModel {
            archive: samples,
            ..Self::default()
        }
    }

    pub fn with_components(mut self, components: usize) -> Self {
        self.components = Some(components);
        self
    }

    /// Fit directly on `samples`.
    pub fn fit(samples: Vec<(Vec<f64>, f64)>, components: Option<usize>) -> Result<Self> {
        let pls = PlsModel::fit(&samples, components)?;
        Ok(SimilarityModel {
            pls: Some(pls),
            archive: samples,
            components,
            version: 1,
        })
    }

    pub fn is_fitted(&self) -> bool {
        self.pls.is_some()
    }

    pub fn pls(&self) -> Option<&PlsModel> {
        self.pls.as_ref()
    }

    pub fn archive(&self) -> &[(Vec<f64>, f64)] {
        &self.archive
    }

    /// Incremented on every successful refit.
    pub fn version(&self) -> u64 {
        self.version
    }

    /// Append pairs to the archive and refit. Returns whether a model was
    /// fitted; with fewer than two archived pairs there is nothing to fit.
    pub fn refit_with(&mut self, pairs: Vec<(Vec<f64>, f64)>) -> Result<bool> {
        let mut archive = self.archive.clone();
        archive.extend(pairs);
        if archive.len() < 2 {
            self.archive = archive;
            return Ok(false);
        }
        let pls = PlsModel::fit(&archive, self.components)?;
        self.archive = archive;
        self.pls = Some(pls);
        self.version += 1;
        Ok(true)
    }

    /// Fitted prediction clamped to `[0, 1]`; the component mean until a
    /// model has been fitted.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        match &self.pls {
            Some(m) => m.predict(x),
            None if x.is_empty() => Ok(0.0),
            None => Ok(x.iter().sum::<f64>() / x.len() as f64),
        }
    }
}
