//! Knowledge base of prior applications: profiles, the catalog of distinct
//! feature specifications, and the application × feature relevance matrix.

mod schema;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::{parse, serialize, FeatureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnotationLevel {
    Word,
    Phrase,
    Sentence,
    Paragraph,
    Document,
}

impl AnnotationLevel {
    pub const ALL: [AnnotationLevel; 5] = [
        AnnotationLevel::Word,
        AnnotationLevel::Phrase,
        AnnotationLevel::Sentence,
        AnnotationLevel::Paragraph,
        AnnotationLevel::Document,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AnnotationLevel::Word => "word",
            AnnotationLevel::Phrase => "phrase",
            AnnotationLevel::Sentence => "sentence",
            AnnotationLevel::Paragraph => "paragraph",
            AnnotationLevel::Document => "document",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        let lower = name.trim().to_ascii_lowercase();
        Self::ALL.into_iter().find(|l| l.as_str() == lower)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApplicationProfile {
    pub id: String,
    pub problem_description: String,
    pub annotation_level: AnnotationLevel,
    /// Path in a problem-type hierarchy, e.g. `classification/sequence-labeling`.
    pub problem_type: String,
    pub performance_metric: String,
}

impl ApplicationProfile {
    pub fn validate(&self) -> Result<()> {
        if self.id.trim().is_empty() {
            return Err(Error::InvalidProfile("id is empty".into()));
        }
        if self.problem_description.trim().is_empty() {
            return Err(Error::InvalidProfile(format!(
                "{}: problem_description is empty",
                self.id
            )));
        }
        Ok(())
    }

    /// Parse and validate a profile document, reporting schema problems with
    /// JSON pointers.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        schema::profile(&value, "")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub feature_id: String,
    /// Canonical serialization of the specification.
    pub fspl_source: String,
}

/// A feature as submitted with a new application.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_id: Option<String>,
    pub fspl_source: String,
    pub relevance: f64,
}

/// `applications[i]` owns row `i` of `pf`; `catalog[j]` owns column `j`.
/// Missing relevance is stored as 0.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KnowledgeBase {
    applications: Vec<ApplicationProfile>,
    catalog: Vec<CatalogEntry>,
    pf: Vec<Vec<f64>>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.applications.is_empty()
    }

    /// Number of applications.
    pub fn m(&self) -> usize {
        self.applications.len()
    }

    /// Number of catalog features.
    pub fn k(&self) -> usize {
        self.catalog.len()
    }

    pub fn applications(&self) -> &[ApplicationProfile] {
        &self.applications
    }

    pub fn catalog(&self) -> &[CatalogEntry] {
        &self.catalog
    }

    pub fn pf(&self) -> &[Vec<f64>] {
        &self.pf
    }

    pub fn app_index(&self, id: &str) -> Option<usize> {
        self.applications.iter().position(|a| a.id == id)
    }

    pub fn application(&self, id: &str) -> Option<&ApplicationProfile> {
        self.applications.iter().find(|a| a.id == id)
    }

    pub fn feature_index(&self, feature_id: &str) -> Option<usize> {
        self.catalog.iter().position(|c| c.feature_id == feature_id)
    }

    pub fn relevance(&self, app: usize, feature: usize) -> f64 {
        self.pf[app][feature]
    }

    pub fn spec(&self, feature: usize) -> FeatureSpec {
        parse(&self.catalog[feature].fspl_source).expect("catalog sources are canonical")
    }

    /// Relevances of one application keyed by feature id, nonzero only.
    pub fn features_of(&self, app: usize) -> Vec<(&str, f64)> {
        self.catalog
            .iter()
            .zip(&self.pf[app])
            .filter(|(_, r)| **r > 0.0)
            .map(|(c, r)| (c.feature_id.as_str(), *r))
            .collect()
    }

    /// Add a profile and its features. Specifications already in the catalog
    /// (by canonical form) reuse their column. Nothing changes on error.
    pub fn add_application(
        &mut self,
        profile: ApplicationProfile,
        features: Vec<FeatureInput>,
    ) -> Result<()> {
        profile.validate()?;
        if self.app_index(&profile.id).is_some() {
            return Err(Error::DuplicateApplication(profile.id));
        }

        let mut catalog = self.catalog.clone();
        let mut row_values: Vec<(usize, f64)> = Vec::with_capacity(features.len());
        for input in features {
            if !(0.0..=1.0).contains(&input.relevance) {
                return Err(Error::InvalidRelevance(input.relevance));
            }
            let canonical = serialize(&parse(&input.fspl_source)?);
            let by_source = catalog.iter().position(|c| c.fspl_source == canonical);
            let by_id = input
                .feature_id
                .as_deref()
                .and_then(|id| catalog.iter().position(|c| c.feature_id == id));
            let column = match (by_source, by_id) {
                (Some(j), Some(i)) if i != j => {
                    return Err(Error::DuplicateFeatureId(
                        input.feature_id.unwrap_or_default(),
                    ))
                }
                (None, Some(_)) => {
                    return Err(Error::DuplicateFeatureId(
                        input.feature_id.unwrap_or_default(),
                    ))
                }
                (Some(j), _) => j,
                (None, None) => {
                    let feature_id = match input.feature_id {
                        Some(id) if !id.trim().is_empty() => id,
                        _ => next_feature_id(&catalog),
                    };
                    catalog.push(CatalogEntry {
                        feature_id,
                        fspl_source: canonical,
                    });
                    catalog.len() - 1
                }
            };
            if row_values.iter().any(|(j, _)| *j == column) {
                return Err(Error::InvalidProfile(format!(
                    "{}: feature {} listed twice",
                    profile.id, catalog[column].feature_id
                )));
            }
            row_values.push((column, input.relevance));
        }

        let k = catalog.len();
        let mut row = vec![0.0; k];
        for (j, r) in row_values {
            row[j] = r;
        }
        for existing in &mut self.pf {
            existing.resize(k, 0.0);
        }
        self.catalog = catalog;
        self.pf.push(row);
        self.applications.push(profile);
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        schema::knowledge_base(&value)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("knowledge base serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json_string()).map_err(|e| Error::io(path, e))
    }

    pub(crate) fn from_parts(
        applications: Vec<ApplicationProfile>,
        catalog: Vec<CatalogEntry>,
        pf: Vec<Vec<f64>>,
    ) -> Self {
        KnowledgeBase {
            applications,
            catalog,
            pf,
        }
    }
}

fn next_feature_id(catalog: &[CatalogEntry]) -> String {
    (catalog.len() + 1..)
        .map(|n| format!("F{n}"))
        .find(|id| catalog.iter().all(|c| &c.feature_id != id))
        .expect("unbounded range")
}
