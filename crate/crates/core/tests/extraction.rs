use std::path::PathBuf;

use fspl_core::corpus::{load_conll, parse_conll, tokenize_and_tag, AnnotatedCorpus};
use fspl_core::embeddings::{cosine, EmbeddingStore};
use fspl_core::fexsys::{build_feature_matrix, resolve_syntactic_units, Cell, Extractor};
use fspl_core::lang::{parse, SuExpr};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn sample() -> AnnotatedCorpus {
    load_conll(fixture("sample_gold.tsv")).unwrap()
}

fn example_spec() -> fspl_core::FeatureSpec {
    parse(&std::fs::read_to_string(fixture("example.fspl")).unwrap()).unwrap()
}

fn column(matrix: &fspl_core::FeatureMatrix, name: &str, rows: usize) -> Vec<String> {
    (0..rows)
        .map(|i| matrix.get(i, name).unwrap().render(", "))
        .collect()
}

#[test]
fn sample_has_eight_sentences_in_one_paragraph() {
    let corpus = sample();
    assert_eq!(corpus.documents.len(), 1);
    assert_eq!(corpus.documents[0].paragraphs.len(), 1);
    assert_eq!(corpus.sentence_count(), 8);
}

#[test]
fn first_sentence_linguistic_columns() {
    let m = build_feature_matrix(&sample(), &example_spec()).unwrap();
    assert_eq!(
        column(&m, "su", 12).join(" "),
        "This XYZ non - interventional study report from a medical professional ."
    );
    assert_eq!(
        column(&m, "POS_Sequence", 12).join(" "),
        "DT JJ AFX HYPH JJ NN NN IN DT JJ NN ."
    );
    assert_eq!(
        column(&m, "POS_Regex", 12).join(" "),
        "FALSE FALSE FALSE FALSE FALSE TRUE TRUE FALSE FALSE FALSE TRUE FALSE"
    );
    assert_eq!(
        column(&m, "Suffix_Prefix", 12).join(" "),
        "his XYZ non - nal udy ort rom a cal nal ."
    );
    assert_eq!(
        column(&m, "Capitalization", 12).join(" "),
        "TRUE TRUE FALSE FALSE FALSE FALSE FALSE FALSE FALSE FALSE FALSE FALSE"
    );
    let special = column(&m, "Special_Chars", 12);
    assert_eq!(special[3], "FALSE, TRUE");
    assert!(special
        .iter()
        .enumerate()
        .all(|(i, s)| i == 3 || s == "FALSE, FALSE"));
}

#[test]
fn first_sentence_context_windows() {
    let m = build_feature_matrix(&sample(), &example_spec()).unwrap();
    let ctx = column(&m, "Context_Window", 12);
    let expected = [
        "XYZ, non, -",
        "This, non, -, interventional",
        "This, XYZ, -, interventional, study",
        "This, XYZ, non, interventional, study, report",
        "XYZ, non, -, study, report, from",
        "non, -, interventional, report, from, a",
        "-, interventional, study, from, a, medical",
        "interventional, study, report, a, medical, professional",
        "study, report, from, medical, professional, .",
        "report, from, a, professional, ., Spontaneous",
        "from, a, medical, ., Spontaneous, report",
        "a, medical, professional, Spontaneous, report, from",
    ];
    assert_eq!(ctx, expected);
}

#[test]
fn pos_regex_unit_enumeration() {
    let units = resolve_syntactic_units(&sample(), &SuExpr::PosRegex("JJ NN".into()));
    let first: Vec<&str> = units
        .iter()
        .filter(|u| u.path.sent == 0)
        .map(|u| u.text.as_str())
        .collect();
    assert_eq!(first, ["interventional study", "medical professional"]);
}

#[test]
fn unit_counts() {
    let corpus = sample();
    let words = resolve_syntactic_units(&corpus, &SuExpr::Word);
    assert_eq!(words.iter().filter(|u| u.path.sent == 0).count(), 12);
    let bigrams = resolve_syntactic_units(
        &parse_conll("d\t0\t0\ta\tDT\nd\t0\t0\tb\tNN\nd\t0\t0\tc\tNN\n").unwrap(),
        &SuExpr::NGram(2),
    );
    assert_eq!(bigrams.len(), 2);
}

#[test]
fn pos_context_filters_after_windowing() {
    let spec = parse("Context_Window := [2, Sentence]; POSContext := NN").unwrap();
    let m = build_feature_matrix(&sample(), &spec).unwrap();
    assert_eq!(m.get(6, "su").unwrap().render(""), "report");
    assert_eq!(
        m.get(6, "Context_Window").unwrap().render(","),
        "interventional,study,from,a"
    );
    assert_eq!(m.get(6, "POSContext").unwrap().render(","), "study");
}

#[test]
fn head_directionality_on_first_sentence() {
    let spec = parse("Head_Directionality := YES").unwrap();
    let m = build_feature_matrix(&sample(), &spec).unwrap();
    let heads = column(&m, "Head_Directionality", 12);
    assert_eq!(heads[9], "HeadFinal");
    assert_eq!(heads[10], "HeadFinal");
    assert_eq!(heads[7], "NotInPhrase");
}

#[test]
fn statistical_features_match_a_scan() {
    let corpus = sample();
    let spec = parse(
        "Analysis_Unit := Document; Term_Frequency := YES; InterArrival_Delay := levetiracetam",
    )
    .unwrap();
    let m = build_feature_matrix(&corpus, &spec).unwrap();
    assert_eq!(m.n_rows(), 1);

    let surfaces: Vec<String> = corpus.tokens().map(|t| t.surface.to_lowercase()).collect();
    let patient = surfaces.iter().filter(|s| *s == "patient").count();
    assert_eq!(patient, 5);
    let tf = m.get(0, "Term_Frequency").unwrap();
    let Cell::List(items) = tf else {
        panic!("{tf:?}")
    };
    assert!(items.contains(&Cell::text(format!("patient:{patient}"))));

    let positions: Vec<usize> = surfaces
        .iter()
        .enumerate()
        .filter(|(_, s)| *s == "levetiracetam")
        .map(|(i, _)| i)
        .collect();
    let expected: Vec<Cell> = positions
        .windows(2)
        .map(|w| Cell::index(w[1] - w[0] - 1))
        .collect();
    assert_eq!(
        m.get(0, "InterArrival_Delay").unwrap(),
        &Cell::List(expected)
    );
    assert_eq!(m.get(0, "InterArrival_Delay").unwrap().render(""), "38");
}

#[test]
fn empty_corpus_keeps_columns() {
    let m = build_feature_matrix(&AnnotatedCorpus::default(), &example_spec()).unwrap();
    assert_eq!(m.n_rows(), 0);
    assert_eq!(m.feature_columns().len(), 6);
    assert_eq!(m.to_csv().unwrap().lines().count(), 1);
}

#[test]
fn single_feature_on_two_tokens() {
    let corpus = parse_conll("d\t0\t0\tDogs\tNNS\nd\t0\t0\tbark\tVBP\n").unwrap();
    let m = build_feature_matrix(&corpus, &parse("POS_Sequence := YES").unwrap()).unwrap();
    assert_eq!((m.n_rows(), m.feature_columns().len()), (2, 1));
}

#[test]
fn exports_are_deterministic() {
    let corpus = sample();
    let spec = example_spec();
    let a = build_feature_matrix(&corpus, &spec).unwrap();
    let b = build_feature_matrix(&corpus, &spec).unwrap();
    assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    assert_eq!(a.to_jsonl(), b.to_jsonl());
}

#[test]
fn semantic_similarity_uses_the_store() {
    let store = EmbeddingStore::load(fixture("toy_vectors.txt")).unwrap();
    let corpus = tokenize_and_tag("physician report");
    let spec = parse("Semantic_Similarity := \"doctor\"").unwrap();
    let m = Extractor::new(&spec)
        .with_embeddings(&store)
        .run(&corpus)
        .unwrap();
    let expected = cosine(
        store.get("physician").unwrap(),
        store.get("doctor").unwrap(),
    )
    .unwrap();
    let Cell::Number(got) = m.get(0, "Semantic_Similarity").unwrap() else {
        panic!()
    };
    assert!((got - expected).abs() < 1e-12);

    let self_sim = Extractor::new(&parse("Semantic_Similarity := physician").unwrap())
        .with_embeddings(&store)
        .run(&corpus)
        .unwrap();
    let Cell::Number(one) = self_sim.get(0, "Semantic_Similarity").unwrap() else {
        panic!()
    };
    assert!((one - 1.0).abs() < 1e-9);

    assert!(build_feature_matrix(&corpus, &spec).is_err());
}

#[test]
fn multi_document_corpus_without_statistics() {
    let corpus = parse_conll("a\t0\t0\tOne\tCD\nb\t0\t0\tTwo\tCD\nb\t0\t0\tthree\tCD\n").unwrap();
    let spec = parse("Context_Window := [1, Document]").unwrap();
    let m = build_feature_matrix(&corpus, &spec).unwrap();
    assert_eq!(m.n_rows(), 3);
    assert_eq!(m.get(0, "Context_Window").unwrap().render(","), "");
    assert_eq!(m.get(1, "Context_Window").unwrap().render(","), "three");
}
