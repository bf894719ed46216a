use std::path::PathBuf;

use fspl_core::feedback::{process_feedback, FeedbackItem, DEFAULT_EPSILON};
use fspl_core::recommender::extract_key_terms;
use fspl_core::{
    AnnotationLevel, ApplicationProfile, EmbeddingStore, Error, FeedbackEvent, FeedbackMode,
    KnowledgeBase, NewSimRule, Policy, Recommender, SimilarityModel,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn setup() -> (KnowledgeBase, EmbeddingStore, ApplicationProfile) {
    (
        KnowledgeBase::load(fixture("reuse_kb.json")).unwrap(),
        EmbeddingStore::load(fixture("toy_vectors.txt")).unwrap(),
        ApplicationProfile::load(fixture("new_profile.json")).unwrap(),
    )
}

const SHARED: [&str; 5] = [
    "dependency",
    "lexical",
    "morphological",
    "orthographic",
    "pos",
];
const SINGLE: [&str; 2] = ["context", "ngram"];

#[test]
fn shared_features_outrank_single_ones_under_every_policy() {
    let (kb, store, new) = setup();
    let rec = Recommender::new(&kb, &store);
    for policy in Policy::ALL {
        let set = rec.recommend(&new, policy).unwrap();
        assert_eq!(set.items.len(), 7);
        let worst_shared = SHARED
            .iter()
            .map(|f| set.rank_of(f).unwrap())
            .max()
            .unwrap();
        let best_single = SINGLE
            .iter()
            .map(|f| set.rank_of(f).unwrap())
            .min()
            .unwrap();
        assert!(worst_shared < best_single, "{policy}");
        for f in SHARED {
            for g in SINGLE {
                assert!(
                    set.item(f).unwrap().relevance > set.item(g).unwrap().relevance,
                    "{policy} {f} {g}"
                );
            }
        }
    }
}

#[test]
fn new_profile_is_closest_to_financial_news() {
    let (kb, store, new) = setup();
    let set = Recommender::new(&kb, &store)
        .recommend(&new, Policy::Probable)
        .unwrap();
    let best = set
        .similarities
        .iter()
        .max_by(|a, b| a.alpha.total_cmp(&b.alpha))
        .unwrap();
    assert_eq!(best.app_id, "financial-news");
}

#[test]
fn evidence_is_alpha_times_relevance() {
    let (kb, store, new) = setup();
    let set = Recommender::new(&kb, &store)
        .recommend(&new, Policy::Conservative)
        .unwrap();
    for item in &set.items {
        assert_eq!(item.evidence.len(), 3);
        for e in &item.evidence {
            assert_eq!(e.norsim, e.alpha * e.delta);
            assert_eq!(Some(e.alpha), set.alpha(&e.app_id));
        }
        let max = item
            .evidence
            .iter()
            .map(|e| e.norsim)
            .fold(f64::MIN, f64::max);
        assert_eq!(item.relevance, max);
    }
}

#[test]
fn ranking_is_deterministic() {
    let (kb, store, new) = setup();
    let rec = Recommender::new(&kb, &store);
    let a = serde_json::to_string(&rec.recommend(&new, Policy::Probable).unwrap()).unwrap();
    let b = serde_json::to_string(&rec.recommend(&new, Policy::Probable).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn ties_break_by_feature_id() {
    let (kb, store, new) = setup();
    let set = Recommender::new(&kb, &store)
        .recommend(&new, Policy::Aggressive)
        .unwrap();
    let ids: Vec<&str> = set.items[..5]
        .iter()
        .map(|r| r.feature_id.as_str())
        .collect();
    assert_eq!(ids, SHARED);
}

#[test]
fn empty_knowledge_base_is_rejected() {
    let (_, store, new) = setup();
    let kb = KnowledgeBase::new();
    let err = Recommender::new(&kb, &store)
        .recommend(&new, Policy::Probable)
        .unwrap_err();
    assert!(matches!(err, Error::EmptyKnowledgeBase));
    assert_eq!(err.to_string(), "knowledge base is empty");
}

#[test]
fn metric_mismatch_is_rejected() {
    let (kb, store, mut new) = setup();
    new.performance_metric = "accuracy".into();
    let err = Recommender::new(&kb, &store)
        .recommend(&new, Policy::Probable)
        .unwrap_err();
    assert!(matches!(err, Error::MetricMismatch { .. }), "{err}");
    new.performance_metric = "  f1 ".into();
    assert!(Recommender::new(&kb, &store)
        .recommend(&new, Policy::Probable)
        .is_ok());
}

#[test]
fn proximity_is_symmetric_and_annotation_sensitive() {
    let (kb, store, new) = setup();
    let rec = Recommender::new(&kb, &store);
    let apps = kb.applications();
    for a in apps.iter().chain([&new]) {
        for b in apps.iter().chain([&new]) {
            let ab = rec.proximity(a, b).unwrap();
            let ba = rec.proximity(b, a).unwrap();
            assert!((ab.alpha() - ba.alpha()).abs() < 1e-12);
        }
    }
    let mut other = new.clone();
    other.id = "other".into();
    let same = rec.proximity(&new, &other).unwrap();
    other.annotation_level = AnnotationLevel::Document;
    let diff = rec.proximity(&new, &other).unwrap();
    let (s, d) = (same.components(), diff.components());
    assert_eq!(s[..s.len() - 1], d[..d.len() - 1]);
    assert_eq!((s[s.len() - 1], d[d.len() - 1]), (1.0, 0.0));
}

#[test]
fn key_terms_of_profiles() {
    let kt = extract_key_terms("Objective of the study was to design a model for automated detection of financial events in the news text.", None);
    assert!(
        kt.entities.contains(&"financial events".to_string()),
        "{kt:?}"
    );
    assert!(kt.actions.contains(&"automate".to_string()), "{kt:?}");
}

#[test]
fn feedback_loop_retrains_and_changes_alpha() {
    let (kb, store, new) = setup();
    let rec = Recommender::new(&kb, &store);
    let set = rec.recommend(&new, Policy::Conservative).unwrap();

    let noop = FeedbackEvent::unchanged(&set, FeedbackMode::Rerank);
    let out = process_feedback(&noop, &set, NewSimRule::Scaled, DEFAULT_EPSILON).unwrap();
    assert!(out.is_noop() && out.retrain.is_empty());

    // the user halves the top feature's score; it binds only financial-news
    let top = &set.items[0];
    assert_eq!(top.bind, ["financial-news"]);
    let event = FeedbackEvent {
        app_id: set.new_app_id.clone(),
        mode: FeedbackMode::Rescore,
        items: vec![FeedbackItem {
            feature_id: top.feature_id.clone(),
            user_rank: None,
            user_rel: Some(top.relevance / 2.0),
        }],
    };
    let out = process_feedback(&event, &set, NewSimRule::Scaled, DEFAULT_EPSILON).unwrap();
    let alpha = set.alpha("financial-news").unwrap();
    assert!((out.new_sim["financial-news"] - alpha / 2.0).abs() < 1e-12);
    assert_eq!(out.retrain, ["financial-news"]);

    let mut model = SimilarityModel::bootstrap(rec.pair_samples().unwrap());
    assert_eq!(model.archive().len(), 3);
    assert!(model.refit_with(out.training_pairs(&set)).unwrap());
    assert_eq!(model.archive().len(), 4);

    let adapted = Recommender::new(&kb, &store).with_model(&model);
    let updated = adapted.recommend(&new, Policy::Conservative).unwrap();
    for s in &updated.similarities {
        let direct = model.predict(&s.proximity.components()).unwrap();
        assert_eq!(s.alpha, direct);
    }
    assert!(updated.alpha("financial-news").unwrap() < alpha);
}
