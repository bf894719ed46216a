//! User corrections to recommendations and similarity-model retraining.

mod model;
mod pls;

pub use model::SimilarityModel;
pub use pls::{default_components, PlsModel};

use std::collections::{BTreeMap, HashMap, HashSet};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recommender::RecommendationSet;

pub const DEFAULT_EPSILON: f64 = 0.05;

const SAME: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedbackMode {
    #[serde(alias = "Rerank", alias = "RERANK")]
    Rerank,
    #[serde(alias = "Rescore", alias = "RESCORE")]
    Rescore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackItem {
    pub feature_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub user_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub user_rel: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackEvent {
    pub app_id: String,
    pub mode: FeedbackMode,
    pub items: Vec<FeedbackItem>,
}

impl FeedbackEvent {
    /// Event that repeats the system's own ranking or scores.
    pub fn unchanged(recs: &RecommendationSet, mode: FeedbackMode) -> Self {
        FeedbackEvent {
            app_id: recs.new_app_id.clone(),
            mode,
            items: recs
                .items
                .iter()
                .enumerate()
                .map(|(pos, r)| FeedbackItem {
                    feature_id: r.feature_id.clone(),
                    user_rank: (mode == FeedbackMode::Rerank).then_some(pos + 1),
                    user_rel: (mode == FeedbackMode::Rescore).then_some(r.relevance),
                })
                .collect(),
        }
    }
}

/// Correction ratios per knowledge-base application.
pub type ChangeLedger = BTreeMap<String, Vec<f64>>;

/// How ledger ratios become a target similarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NewSimRule {
    /// `clamp(mean(x) * alpha, 0, 1)`: ratios act as multiplicative corrections.
    #[default]
    Scaled,
    /// `mean(x)` as is.
    RawMean,
}

/// `user_rel / system_rel`, or `None` when the system score is not positive.
pub fn ratio_rescore(user_rel: f64, system_rel: f64) -> Option<f64> {
    (system_rel > 0.0).then(|| user_rel / system_rel)
}

/// Relevance the system gave to whatever it ranked at `user_rank` (1-based),
/// divided by the application's own relevance for the moved feature.
pub fn ratio_rerank(user_rank: usize, system_relevances: &[f64], delta: f64) -> Option<f64> {
    if delta <= 0.0 || user_rank == 0 {
        return None;
    }
    system_relevances.get(user_rank - 1).map(|rel| rel / delta)
}

pub fn should_retrain(new_sim: f64, alpha: f64, epsilon: f64) -> bool {
    (new_sim - alpha).abs() >= epsilon * alpha
}

pub fn new_similarity(ratios: &[f64], alpha: f64, rule: NewSimRule) -> f64 {
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    match rule {
        NewSimRule::Scaled => (mean * alpha).clamp(0.0, 1.0),
        NewSimRule::RawMean => mean,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackOutcome {
    pub ledger: ChangeLedger,
    pub new_sim: BTreeMap<String, f64>,
    /// Applications whose corrected similarity moved enough to retrain on.
    pub retrain: Vec<String>,
    /// Changed features whose ratio could not be formed.
    pub skipped: Vec<String>,
}

impl FeedbackOutcome {
    pub fn is_noop(&self) -> bool {
        self.ledger.is_empty()
    }

    /// `(proximity components, target)` pairs for the applications that
    /// passed the retrain gate.
    pub fn training_pairs(&self, recs: &RecommendationSet) -> Vec<(Vec<f64>, f64)> {
        self.retrain
            .iter()
            .filter_map(|id| {
                let sim = recs.similarity(id)?;
                Some((sim.proximity.components(), self.new_sim[id]))
            })
            .collect()
    }
}

fn check_items(event: &FeedbackEvent, recs: &RecommendationSet) -> Result<()> {
    if event.app_id != recs.new_app_id {
        return Err(Error::InvalidFeedback(format!(
            "event is for {:?} but recommendations are for {:?}",
            event.app_id, recs.new_app_id
        )));
    }
    let mut seen = HashSet::new();
    for item in &event.items {
        if recs.item(&item.feature_id).is_none() {
            return Err(Error::UnknownFeature(item.feature_id.clone()));
        }
        if !seen.insert(item.feature_id.as_str()) {
            return Err(Error::InvalidFeedback(format!(
                "feature {:?} listed twice",
                item.feature_id
            )));
        }
    }
    match event.mode {
        FeedbackMode::Rescore => {
            for item in &event.items {
                match item.user_rel {
                    Some(r) if (0.0..=1.0).contains(&r) => {}
                    Some(r) => return Err(Error::InvalidRelevance(r)),
                    None => {
                        return Err(Error::InvalidFeedback(format!(
                            "rescore item {:?} has no user_rel",
                            item.feature_id
                        )))
                    }
                }
            }
        }
        FeedbackMode::Rerank => {
            let k = recs.items.len();
            if event.items.len() != k {
                return Err(Error::InvalidFeedback(format!(
                    "rerank must rank all {k} features, got {}",
                    event.items.len()
                )));
            }
            let mut ranks: Vec<usize> = Vec::with_capacity(k);
            for item in &event.items {
                ranks.push(item.user_rank.ok_or_else(|| {
                    Error::InvalidFeedback(format!(
                        "rerank item {:?} has no user_rank",
                        item.feature_id
                    ))
                })?);
            }
            ranks.sort_unstable();
            if ranks.iter().enumerate().any(|(i, &r)| r != i + 1) {
                return Err(Error::InvalidFeedback(format!(
                    "user ranks are not a permutation of 1..{k}"
                )));
            }
        }
    }
    Ok(())
}

/// Ledger, corrected similarities and retrain decisions for one event.
/// Only features the user actually changed contribute; each contributes one
/// ratio to every application in its bind set.
pub fn process_feedback(
    event: &FeedbackEvent,
    recs: &RecommendationSet,
    rule: NewSimRule,
    epsilon: f64,
) -> Result<FeedbackOutcome> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidFeedback(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    check_items(event, recs)?;

    let system_relevances: Vec<f64> = recs.items.iter().map(|r| r.relevance).collect();
    let mut ledger = ChangeLedger::new();
    let mut skipped = Vec::new();

    for item in &event.items {
        let rank = recs.rank_of(&item.feature_id).expect("checked above");
        let rec = &recs.items[rank];
        let deltas: HashMap<&str, f64> = rec
            .evidence
            .iter()
            .map(|e| (e.app_id.as_str(), e.delta))
            .collect();
        let mut entries = Vec::with_capacity(rec.bind.len());
        match event.mode {
            FeedbackMode::Rescore => {
                let user = item.user_rel.expect("checked above");
                if (user - rec.relevance).abs() <= SAME {
                    continue;
                }
                match ratio_rescore(user, rec.relevance) {
                    Some(x) => entries.extend(rec.bind.iter().map(|app| (app, x))),
                    None => {
                        warn!("skipping {}: system relevance is 0", rec.feature_id);
                        skipped.push(rec.feature_id.clone());
                        continue;
                    }
                }
            }
            FeedbackMode::Rerank => {
                let user = item.user_rank.expect("checked above");
                if user == rank + 1 {
                    continue;
                }
                for app in &rec.bind {
                    let delta = deltas.get(app.as_str()).copied().unwrap_or(0.0);
                    match ratio_rerank(user, &system_relevances, delta) {
                        Some(x) => entries.push((app, x)),
                        None => {
                            warn!("skipping {} for {app}: relevance is 0", rec.feature_id);
                            skipped.push(rec.feature_id.clone());
                        }
                    }
                }
            }
        }
        for (app, x) in entries {
            if x.is_finite() && x > 0.0 {
                ledger.entry(app.clone()).or_default().push(x);
            } else {
                warn!(
                    "skipping non-positive ratio {x} for {} / {app}",
                    rec.feature_id
                );
                skipped.push(rec.feature_id.clone());
            }
        }
    }
    skipped.dedup();

    let mut new_sim = BTreeMap::new();
    let mut retrain = Vec::new();
    for (app, ratios) in &ledger {
        let alpha = recs
            .alpha(app)
            .ok_or_else(|| Error::UnknownApplication(app.clone()))?;
        let sim = new_similarity(ratios, alpha, rule);
        if should_retrain(sim, alpha, epsilon) {
            retrain.push(app.clone());
        }
        new_sim.insert(app.clone(), sim);
    }
    Ok(FeedbackOutcome {
        ledger,
        new_sim,
        retrain,
        skipped,
    })
}
