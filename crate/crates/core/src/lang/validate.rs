use std::collections::HashSet;
use std::fmt;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::ast::{AnalysisUnit, FeatureDecl, FeatureName, FeatureSpec, SuExpr};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub feature: Option<FeatureName>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.feature {
            Some(name) => write!(f, "{name}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Whether a feature may be declared at the given analysis unit.
pub fn check_association(feature: FeatureName, au: AnalysisUnit) -> Result<(), &'static str> {
    if feature.is_statistical() {
        match au {
            AnalysisUnit::Document | AnalysisUnit::Corpus => Ok(()),
            _ => Err("requires Document/Corpus AU"),
        }
    } else {
        match au {
            AnalysisUnit::Sentence | AnalysisUnit::Para | AnalysisUnit::Document => Ok(()),
            AnalysisUnit::Corpus => Err("requires Sentence/Para/Document AU"),
        }
    }
}

/// Anchor a user pattern so it must match the whole input.
pub(crate) fn anchored(pattern: &str) -> Result<Regex, regex::Error> {
    Regex::new(&format!("^(?:{pattern})$"))
}

pub(crate) fn check_su_regexes(expr: &SuExpr) -> Result<(), String> {
    match expr {
        SuExpr::PosRegex(p) | SuExpr::CharRegex(p) => anchored(p)
            .map(|_| ())
            .map_err(|e| format!("invalid regex {p:?}: {e}")),
        SuExpr::NGram(0) => Err("NGram size must be >= 1".into()),
        SuExpr::And(a, b) | SuExpr::Or(a, b) => {
            check_su_regexes(a)?;
            check_su_regexes(b)
        }
        SuExpr::Not(a) => check_su_regexes(a),
        _ => Ok(()),
    }
}

/// Domain checks on one declaration's parameters.
pub(crate) fn check_params(decl: &FeatureDecl) -> Result<(), String> {
    let regex_ok = |p: &str| {
        anchored(p)
            .map(|_| ())
            .map_err(|e| format!("invalid regex {p:?}: {e}"))
    };
    match decl {
        FeatureDecl::PosRegex { pattern } | FeatureDecl::PosContext { pattern } => {
            regex_ok(pattern)
        }
        FeatureDecl::SuffixPrefix {
            length, pattern, ..
        } => {
            if *length == 0 {
                return Err("length must be >= 1".into());
            }
            pattern.as_deref().map_or(Ok(()), regex_ok)
        }
        FeatureDecl::SpecialChars { chars } if chars.is_empty() => {
            Err("at least one character is required".into())
        }
        FeatureDecl::ContextWindow { width: 0, .. } => Err("width must be >= 1".into()),
        FeatureDecl::NGram { n: 0 } => Err("n must be >= 1".into()),
        FeatureDecl::SemanticSimilarity { reference } if reference.trim().is_empty() => {
            Err("reference term is empty".into())
        }
        FeatureDecl::InterArrivalDelay { term } if term.trim().is_empty() => {
            Err("term is empty".into())
        }
        _ => Ok(()),
    }
}

/// Every problem with a spec; empty when the spec can be executed.
pub fn validate(spec: &FeatureSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if spec.features.is_empty() {
        out.push(Diagnostic {
            feature: None,
            message: "no features declared".into(),
        });
    }
    if !spec.meta.syntactic_unit.is_positive() {
        out.push(Diagnostic {
            feature: None,
            message: "Syntactic_Unit: NOT must be combined with a positive operand".into(),
        });
    }
    if let Err(message) = check_su_regexes(&spec.meta.syntactic_unit) {
        out.push(Diagnostic {
            feature: None,
            message: format!("Syntactic_Unit: {message}"),
        });
    }

    let mut seen = HashSet::new();
    for decl in &spec.features {
        let name = decl.name();
        if !seen.insert(name) {
            out.push(Diagnostic {
                feature: Some(name),
                message: "declared more than once".into(),
            });
        }
        if let Err(message) = check_association(name, spec.meta.analysis_unit) {
            out.push(Diagnostic {
                feature: Some(name),
                message: message.into(),
            });
        }
        if let Err(message) = check_params(decl) {
            out.push(Diagnostic {
                feature: Some(name),
                message,
            });
        }
    }
    if spec.has_feature(FeatureName::PosContext) && !spec.has_feature(FeatureName::ContextWindow) {
        out.push(Diagnostic {
            feature: Some(FeatureName::PosContext),
            message: "requires Context_Window".into(),
        });
    }
    out
}
