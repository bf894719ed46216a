//! Application proximity and ranked feature recommendations.

mod keyterms;
mod policy;
mod proximity;

pub use keyterms::{extract_key_terms, KeyTerms};
pub use policy::{apply_policy, bind_set, norsim, Policy};
pub use proximity::{field_similarity, FieldProximity, ProximityVector, PROFILE_FIELDS};

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::appkb::{ApplicationProfile, KnowledgeBase};
use crate::corpus::Thesaurus;
use crate::embeddings::{field_embedding, Bm25Params, Bm25Weights, EmbeddingStore, FieldEmbedding};
use crate::error::{Error, Result};
use crate::feedback::SimilarityModel;

/// One application's contribution to a feature's relevance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub app_id: String,
    pub alpha: f64,
    pub delta: f64,
    pub norsim: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub feature_id: String,
    pub fspl_source: String,
    pub relevance: f64,
    pub bind: Vec<String>,
    pub evidence: Vec<Evidence>,
}

/// Similarity of the new application to one knowledge-base application.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppSimilarity {
    pub app_id: String,
    pub alpha: f64,
    pub proximity: ProximityVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendationSet {
    pub new_app_id: String,
    pub policy: Policy,
    pub similarities: Vec<AppSimilarity>,
    /// Ranked by relevance descending, then feature id ascending.
    pub items: Vec<Recommendation>,
}

impl RecommendationSet {
    pub fn alpha(&self, app_id: &str) -> Option<f64> {
        self.similarities
            .iter()
            .find(|s| s.app_id == app_id)
            .map(|s| s.alpha)
    }

    pub fn similarity(&self, app_id: &str) -> Option<&AppSimilarity> {
        self.similarities.iter().find(|s| s.app_id == app_id)
    }

    pub fn item(&self, feature_id: &str) -> Option<&Recommendation> {
        self.items.iter().find(|r| r.feature_id == feature_id)
    }

    /// Position (0-based) of a feature in the ranking.
    pub fn rank_of(&self, feature_id: &str) -> Option<usize> {
        self.items.iter().position(|r| r.feature_id == feature_id)
    }
}

fn rank_order(a: &Recommendation, b: &Recommendation) -> Ordering {
    b.relevance
        .total_cmp(&a.relevance)
        .then_with(|| a.feature_id.cmp(&b.feature_id))
}

/// Score every catalog feature from per-application similarities and rank
/// them. `alphas[i]` belongs to the knowledge base's `i`-th application.
pub fn rank_catalog(
    kb: &KnowledgeBase,
    alphas: &[f64],
    policy: Policy,
) -> Result<Vec<Recommendation>> {
    if kb.is_empty() {
        return Err(Error::EmptyKnowledgeBase);
    }
    let apps = kb.applications();
    let ns = norsim(alphas, kb.pf())?;

    let mut items = Vec::with_capacity(kb.k());
    for (j, entry) in kb.catalog().iter().enumerate() {
        let column: Vec<f64> = ns.iter().map(|row| row[j]).collect();
        let relevance = apply_policy(&column, policy)?;
        let bind = bind_set(&column, policy, relevance)
            .into_iter()
            .map(|i| apps[i].id.clone())
            .collect();
        let evidence = apps
            .iter()
            .enumerate()
            .map(|(i, app)| Evidence {
                app_id: app.id.clone(),
                alpha: alphas[i],
                delta: kb.relevance(i, j),
                norsim: column[i],
            })
            .collect();
        items.push(Recommendation {
            feature_id: entry.feature_id.clone(),
            fspl_source: entry.fspl_source.clone(),
            relevance,
            bind,
            evidence,
        });
    }
    items.sort_by(rank_order);
    Ok(items)
}

struct Prepared {
    terms: [KeyTerms; 3],
}

/// Scores proximity against a knowledge base and ranks its catalog.
pub struct Recommender<'a> {
    kb: &'a KnowledgeBase,
    store: &'a EmbeddingStore,
    thesaurus: Option<&'a Thesaurus>,
    model: Option<&'a SimilarityModel>,
    bm25: Bm25Params,
}

impl<'a> Recommender<'a> {
    pub fn new(kb: &'a KnowledgeBase, store: &'a EmbeddingStore) -> Self {
        Recommender {
            kb,
            store,
            thesaurus: None,
            model: None,
            bm25: Bm25Params::default(),
        }
    }

    pub fn with_thesaurus(mut self, thesaurus: &'a Thesaurus) -> Self {
        self.thesaurus = Some(thesaurus);
        self
    }

    /// Use a fitted model instead of the component mean as similarity.
    pub fn with_model(mut self, model: &'a SimilarityModel) -> Self {
        self.model = Some(model);
        self
    }

    pub fn with_bm25_params(mut self, params: Bm25Params) -> Self {
        self.bm25 = params;
        self
    }

    fn prepare(&self, profile: &ApplicationProfile) -> Prepared {
        let t = self.thesaurus;
        Prepared {
            terms: [
                extract_key_terms(&profile.problem_description, t),
                extract_key_terms(&profile.problem_type, t),
                extract_key_terms(&profile.performance_metric, t),
            ],
        }
    }

    /// BM25 weights over the knowledge base plus any profiles not in it; each
    /// application's fields together form one document.
    fn weights(
        &self,
        kb_prepared: &[Prepared],
        extra: &[(&ApplicationProfile, &Prepared)],
    ) -> Bm25Weights {
        let mut docs: Vec<Vec<String>> = kb_prepared
            .iter()
            .map(|p| p.terms.iter().flat_map(KeyTerms::words).collect())
            .collect();
        let mut outside: Vec<&(&ApplicationProfile, &Prepared)> = extra
            .iter()
            .filter(|(p, _)| self.kb.app_index(&p.id).is_none())
            .collect();
        outside.sort_by(|a, b| a.0.id.cmp(&b.0.id));
        outside.dedup_by(|a, b| a.0.id == b.0.id);
        docs.extend(
            outside
                .into_iter()
                .map(|(_, p)| p.terms.iter().flat_map(KeyTerms::words).collect()),
        );
        Bm25Weights::from_documents(&docs, self.bm25)
    }

    fn embed(&self, prepared: &Prepared, weights: &Bm25Weights) -> Vec<FieldEmbedding> {
        prepared
            .terms
            .iter()
            .map(|kt| field_embedding(&kt.entities, &kt.actions, &kt.residual, self.store, weights))
            .collect()
    }

    fn compare(
        a: (&ApplicationProfile, &[FieldEmbedding]),
        b: (&ApplicationProfile, &[FieldEmbedding]),
    ) -> Result<ProximityVector> {
        let fields = PROFILE_FIELDS
            .iter()
            .zip(a.1.iter().zip(b.1))
            .map(|(name, (x, y))| field_similarity(name, x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProximityVector {
            fields,
            au: if a.0.annotation_level == b.0.annotation_level {
                1.0
            } else {
                0.0
            },
        })
    }

    fn kb_prepared(&self) -> Vec<Prepared> {
        self.kb
            .applications()
            .par_iter()
            .map(|p| self.prepare(p))
            .collect()
    }

    /// Proximity between two profiles, either of which may be outside the
    /// knowledge base.
    pub fn proximity(
        &self,
        a: &ApplicationProfile,
        b: &ApplicationProfile,
    ) -> Result<ProximityVector> {
        let kb_prepared = self.kb_prepared();
        let (pa, pb) = (self.prepare(a), self.prepare(b));
        let weights = self.weights(&kb_prepared, &[(a, &pa), (b, &pb)]);
        let (ea, eb) = (self.embed(&pa, &weights), self.embed(&pb, &weights));
        Self::compare((a, &ea), (b, &eb))
    }

    /// Similarity score for a proximity vector: the fitted model when one is
    /// set, otherwise the component mean.
    pub fn similarity(&self, proximity: &ProximityVector) -> Result<f64> {
        match self.model {
            Some(m) => m.predict(&proximity.components()),
            None => Ok(proximity.alpha()),
        }
    }

    /// Proximity of `new` to every knowledge-base application, in KB order.
    pub fn proximities(&self, new: &ApplicationProfile) -> Result<Vec<ProximityVector>> {
        let kb_prepared = self.kb_prepared();
        let pn = self.prepare(new);
        let weights = self.weights(&kb_prepared, &[(new, &pn)]);
        let en = self.embed(&pn, &weights);
        self.kb
            .applications()
            .par_iter()
            .zip(kb_prepared.par_iter())
            .map(|(app, prepared)| {
                Self::compare((new, &en), (app, &self.embed(prepared, &weights)))
            })
            .collect()
    }

    /// Proximity and mean similarity of every unordered pair of knowledge-base
    /// applications; the initial training archive of the similarity model.
    pub fn pair_samples(&self) -> Result<Vec<(Vec<f64>, f64)>> {
        let kb_prepared = self.kb_prepared();
        let weights = self.weights(&kb_prepared, &[]);
        let embedded: Vec<Vec<FieldEmbedding>> = kb_prepared
            .iter()
            .map(|p| self.embed(p, &weights))
            .collect();
        let apps = self.kb.applications();
        let mut out = Vec::new();
        for i in 0..apps.len() {
            for j in i + 1..apps.len() {
                let pv = Self::compare((&apps[i], &embedded[i]), (&apps[j], &embedded[j]))?;
                out.push((pv.components(), pv.alpha()));
            }
        }
        Ok(out)
    }

    fn check_metric(&self, new: &ApplicationProfile) -> Result<()> {
        let norm = |s: &str| s.trim().to_lowercase();
        let expected = norm(&new.performance_metric);
        match self
            .kb
            .applications()
            .iter()
            .find(|a| norm(&a.performance_metric) != expected)
        {
            Some(app) => Err(Error::MetricMismatch {
                app_id: app.id.clone(),
                expected: new.performance_metric.clone(),
                found: app.performance_metric.clone(),
            }),
            None => Ok(()),
        }
    }

    pub fn recommend(&self, new: &ApplicationProfile, policy: Policy) -> Result<RecommendationSet> {
        if self.kb.is_empty() {
            return Err(Error::EmptyKnowledgeBase);
        }
        new.validate()?;
        self.check_metric(new)?;

        let proximities = self.proximities(new)?;
        let alphas = proximities
            .iter()
            .map(|p| self.similarity(p))
            .collect::<Result<Vec<f64>>>()?;
        let apps = self.kb.applications();
        let items = rank_catalog(self.kb, &alphas, policy)?;

        let similarities = apps
            .iter()
            .zip(alphas)
            .zip(proximities)
            .map(|((app, alpha), proximity)| AppSimilarity {
                app_id: app.id.clone(),
                alpha,
                proximity,
            })
            .collect();
        Ok(RecommendationSet {
            new_app_id: new.id.clone(),
            policy,
            similarities,
            items,
        })
    }
}
