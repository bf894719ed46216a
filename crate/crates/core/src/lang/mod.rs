//! The nlpFSpL feature specification language.

mod ast;
mod parser;
mod serialize;
mod validate;

pub use ast::*;
pub use parser::{parse, SpecError, SpecErrorKind};
pub use serialize::{serialize, su_to_string};
pub use validate::{check_association, validate, Diagnostic};

pub(crate) use validate::anchored;

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE_ONE: &str = "\
Analysis_Unit := Sentence;
Syntactic_Unit := Word;
POS_Sequence := YES;
POS_Regex := NN;
Suffix_Prefix := [Suffix, 3, NULL];
Capitalization := First;
Special_Chars := @,-;
Context_Window := [3, Para];
";

    fn err(src: &str) -> SpecError {
        parse(src).unwrap_err()
    }

    #[test]
    fn parses_example_spec() {
        let spec = parse(TABLE_ONE).unwrap();
        assert_eq!(spec.meta.analysis_unit, AnalysisUnit::Sentence);
        assert_eq!(spec.meta.syntactic_unit, SuExpr::Word);
        assert_eq!(spec.features.len(), 6);
        assert_eq!(
            spec.feature(FeatureName::SuffixPrefix),
            Some(&FeatureDecl::SuffixPrefix {
                kind: AffixKind::Suffix,
                length: 3,
                pattern: None
            })
        );
        assert_eq!(
            spec.feature(FeatureName::SpecialChars),
            Some(&FeatureDecl::SpecialChars {
                chars: vec!['@', '-']
            })
        );
        assert_eq!(
            spec.feature(FeatureName::ContextWindow),
            Some(&FeatureDecl::ContextWindow {
                width: 3,
                scope: ContextScope::Para
            })
        );
        assert!(validate(&spec).is_empty());
    }

    #[test]
    fn canonical_form_is_stable() {
        let spec = parse(TABLE_ONE).unwrap();
        let text = serialize(&spec);
        assert_eq!(text, TABLE_ONE);
        assert_eq!(parse(&text).unwrap(), spec);
    }

    #[test]
    fn keys_are_case_insensitive_and_newlines_terminate() {
        let a = parse("analysis_unit := sentence\nPOS_REGEX := NN\n").unwrap();
        let b = parse("Analysis_Unit := Sentence; pos_regex := NN;").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn comments_are_ignored() {
        let spec = parse("# header\nPOS_Regex := \"NN#\" # trailing\n").unwrap();
        assert_eq!(
            spec.features,
            vec![FeatureDecl::PosRegex {
                pattern: "NN#".into()
            }]
        );
    }

    #[test]
    fn defaults_apply() {
        let spec = parse("Capitalization := Any;").unwrap();
        assert_eq!(spec.meta, MetaBlock::default());
    }

    #[test]
    fn minimal_spec_serializes_to_three_statements() {
        let spec = parse("POS_Regex := NN").unwrap();
        assert_eq!(serialize(&spec).lines().count(), 3);
    }

    #[test]
    fn su_expressions() {
        let spec =
            parse("Syntactic_Unit := POS Regex \"JJ NN\" AND NOT(Word);\nPOS_Regex := NN").unwrap();
        assert_eq!(
            spec.meta.syntactic_unit,
            SuExpr::And(
                Box::new(SuExpr::PosRegex("JJ NN".into())),
                Box::new(SuExpr::Not(Box::new(SuExpr::Word)))
            )
        );
        let spec = parse("Syntactic_Unit := Word OR Phrase AND NGram(2);POS_Regex := NN").unwrap();
        assert_eq!(
            spec.meta.syntactic_unit,
            SuExpr::Or(
                Box::new(SuExpr::Word),
                Box::new(SuExpr::And(
                    Box::new(SuExpr::Phrase),
                    Box::new(SuExpr::NGram(2))
                ))
            )
        );
    }

    #[test]
    fn lone_not_is_rejected() {
        let e = err("Syntactic_Unit := NOT Word;");
        assert_eq!(e.kind, SpecErrorKind::Syntax);
        assert_eq!((e.line, e.column), (1, 19));
    }

    #[test]
    fn error_positions() {
        let e = err("POS_Regex := NN;\nBogus_Key := 1;");
        assert_eq!(e.kind, SpecErrorKind::UnknownKey);
        assert_eq!((e.line, e.column), (2, 1));

        let e = err("Context_Window := [0, Para];");
        assert_eq!(e.kind, SpecErrorKind::Domain);
        assert_eq!((e.line, e.column), (1, 20));

        let e = err("Context_Window := [3];");
        assert_eq!(e.kind, SpecErrorKind::Arity);

        let e = err("Context_Window := 3, Para;");
        assert_eq!(e.kind, SpecErrorKind::MalformedTuple);

        let e =
            err("Context_Window := [3, Para];\nPOSContext := NN;\nContext_Window := [2, Para];");
        assert_eq!(e.kind, SpecErrorKind::Duplicate);
        assert_eq!(e.line, 3);

        let e = err("POSContext := NN|VB;");
        assert_eq!(e.kind, SpecErrorKind::Dependency);

        let e = err("Analysis_Unit := Sentence; Term_Frequency := YES;");
        assert_eq!(e.kind, SpecErrorKind::Incompatible);

        let e = err("Analysis_Unit := Corpus; Capitalization := First;");
        assert_eq!(e.kind, SpecErrorKind::Incompatible);

        let e = err("POS_Regex := \"NN(\";");
        assert_eq!(e.kind, SpecErrorKind::Regex);

        let e = err("POS_Regex := \"NN;");
        assert_eq!(e.kind, SpecErrorKind::Syntax);
    }

    #[test]
    fn statistical_features_at_document_level() {
        let spec = parse(
            "Analysis_Unit := Document; Term_Frequency := YES; BM25_Weight := YES; InterArrival_Delay := levetiracetam",
        )
        .unwrap();
        assert_eq!(spec.features.len(), 3);
        let again = parse(&serialize(&spec)).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn pos_sequence_no_disables_feature() {
        let spec = parse("POS_Sequence := NO; POS_Regex := NN").unwrap();
        assert!(!spec.has_feature(FeatureName::PosSequence));
    }

    #[test]
    fn validate_reports_empty_spec() {
        let spec = parse("Analysis_Unit := Sentence").unwrap();
        let diags = validate(&spec);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].message, "no features declared");
    }

    #[test]
    fn escaped_quotes_round_trip() {
        let spec = FeatureSpec {
            meta: MetaBlock {
                syntactic_unit: SuExpr::CharRegex(r#"a"b\d"#.into()),
                ..MetaBlock::default()
            },
            features: vec![
                FeatureDecl::PosRegex {
                    pattern: r#"NN ("|;)"#.into(),
                },
                FeatureDecl::SpecialChars {
                    chars: vec![',', '"', ';', '\\', ' '],
                },
                FeatureDecl::SemanticSimilarity {
                    reference: "adverse \"event\"".into(),
                },
            ],
        };
        let text = serialize(&spec);
        assert_eq!(parse(&text).unwrap(), spec, "{text}");
    }
}
