//! Canonical text form. `parse(serialize(s)) == s` for every valid spec.

use std::fmt::Write as _;

use super::ast::{
    AffixKind, CapitalizationMode, ContextScope, FeatureDecl, FeatureSpec, PhraseFilter, SuExpr,
};

pub fn serialize(spec: &FeatureSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Analysis_Unit := {};",
        spec.meta.analysis_unit.as_str()
    );
    let _ = writeln!(
        out,
        "Syntactic_Unit := {};",
        su_to_string(&spec.meta.syntactic_unit)
    );
    if spec.meta.normalize_variants {
        out.push_str("Normalize_Morphosyntactic_Variants := YES;\n");
    }
    for decl in &spec.features {
        let _ = writeln!(
            out,
            "{} := {};",
            decl.name().as_str(),
            value_to_string(decl)
        );
    }
    out
}

pub fn su_to_string(expr: &SuExpr) -> String {
    match expr {
        SuExpr::Word => "Word".into(),
        SuExpr::Phrase => "Phrase".into(),
        SuExpr::NGram(n) => format!("NGram({n})"),
        SuExpr::PosRegex(p) => format!("POS Regex {}", quote(p)),
        SuExpr::CharRegex(p) => format!("Regex {}", quote(p)),
        SuExpr::And(a, b) => format!("{} AND {}", operand(a), operand(b)),
        SuExpr::Or(a, b) => format!("{} OR {}", operand(a), operand(b)),
        SuExpr::Not(a) => format!("NOT({})", su_to_string(a)),
    }
}

fn operand(expr: &SuExpr) -> String {
    match expr {
        SuExpr::And(..) | SuExpr::Or(..) => format!("({})", su_to_string(expr)),
        _ => su_to_string(expr),
    }
}

fn value_to_string(decl: &FeatureDecl) -> String {
    match decl {
        FeatureDecl::PosSequence | FeatureDecl::TermFrequency | FeatureDecl::Bm25Weight => {
            "YES".into()
        }
        FeatureDecl::PosRegex { pattern } | FeatureDecl::PosContext { pattern } => {
            bare_or_quoted(pattern)
        }
        FeatureDecl::SuffixPrefix {
            kind,
            length,
            pattern,
        } => {
            let kind = match kind {
                AffixKind::Suffix => "Suffix",
                AffixKind::Prefix => "Prefix",
            };
            let pattern = pattern.as_deref().map_or_else(|| "NULL".to_string(), quote);
            format!("[{kind}, {length}, {pattern}]")
        }
        FeatureDecl::Capitalization { mode } => match mode {
            CapitalizationMode::First => "First",
            CapitalizationMode::All => "All",
            CapitalizationMode::Any => "Any",
        }
        .into(),
        FeatureDecl::SpecialChars { chars } => chars
            .iter()
            .map(|&c| {
                if c.is_whitespace() || ",;#\"'[]\\".contains(c) {
                    quote(&c.to_string())
                } else {
                    c.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(","),
        FeatureDecl::ContextWindow { width, scope } => {
            let scope = match scope {
                ContextScope::Sentence => "Sentence",
                ContextScope::Para => "Para",
                ContextScope::Document => "Document",
            };
            format!("[{width}, {scope}]")
        }
        FeatureDecl::HeadDirectionality { phrase } => match phrase {
            PhraseFilter::Any => "YES",
            PhraseFilter::Np => "NP",
            PhraseFilter::Vp => "VP",
        }
        .into(),
        FeatureDecl::NGram { n } => n.to_string(),
        FeatureDecl::SemanticSimilarity { reference } => quote(reference),
        FeatureDecl::InterArrivalDelay { term } => quote(term),
    }
}

/// Patterns are written bare when the statement scanner would read them back
/// unchanged.
fn bare_or_quoted(pattern: &str) -> String {
    let safe = !pattern.is_empty()
        && pattern.trim() == pattern
        && !pattern.starts_with('[')
        && !pattern.contains([';', '#', '"', '\'', '\n', '\r']);
    if safe {
        pattern.to_string()
    } else {
        quote(pattern)
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}
