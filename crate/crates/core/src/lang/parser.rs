//! Concrete syntax: one `Key := Value` statement per feature, terminated by
//! `;` or a newline. `#` starts a comment. Keys are case-insensitive.

use std::collections::HashMap;
use std::fmt;

use super::ast::{
    AffixKind, AnalysisUnit, CapitalizationMode, ContextScope, FeatureDecl, FeatureName,
    FeatureSpec, MetaBlock, PhraseFilter, SuExpr,
};
use super::validate::{check_association, check_params, check_su_regexes};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecErrorKind {
    Syntax,
    UnknownKey,
    MalformedTuple,
    Arity,
    Domain,
    Regex,
    Incompatible,
    Duplicate,
    Dependency,
}

impl fmt::Display for SpecErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpecErrorKind::Syntax => "syntax error",
            SpecErrorKind::UnknownKey => "unknown key",
            SpecErrorKind::MalformedTuple => "malformed tuple",
            SpecErrorKind::Arity => "arity mismatch",
            SpecErrorKind::Domain => "invalid value",
            SpecErrorKind::Regex => "invalid regex",
            SpecErrorKind::Incompatible => "incompatible with analysis unit",
            SpecErrorKind::Duplicate => "duplicate declaration",
            SpecErrorKind::Dependency => "missing dependency",
        })
    }
}

/// A parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}: {message}")]
pub struct SpecError {
    pub line: usize,
    pub column: usize,
    pub kind: SpecErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn offset(self, chars: usize) -> Pos {
        Pos {
            line: self.line,
            column: self.column + chars,
        }
    }

    fn error(self, kind: SpecErrorKind, message: impl Into<String>) -> SpecError {
        SpecError {
            line: self.line,
            column: self.column,
            kind,
            message: message.into(),
        }
    }
}

struct Statement {
    pos: Pos,
    text: String,
}

fn split_statements(source: &str) -> Result<Vec<Statement>, SpecError> {
    let mut statements = Vec::new();
    let mut buf = String::new();
    let mut start = Pos { line: 1, column: 1 };
    let mut here = Pos { line: 1, column: 1 };
    let mut quote: Option<(char, Pos)> = None;
    let mut escaped = false;
    let mut in_comment = false;

    let flush = |buf: &mut String, start: Pos, out: &mut Vec<Statement>| {
        let text = buf.trim_end();
        if !text.is_empty() {
            out.push(Statement {
                pos: start,
                text: text.to_string(),
            });
        }
        buf.clear();
    };

    for c in source.chars() {
        if c == '\n' {
            if let Some((_, qpos)) = quote {
                return Err(qpos.error(SpecErrorKind::Syntax, "unterminated string"));
            }
            in_comment = false;
            flush(&mut buf, start, &mut statements);
            here = Pos {
                line: here.line + 1,
                column: 1,
            };
            continue;
        }
        if in_comment {
            here.column += 1;
            continue;
        }
        if let Some((q, _)) = quote {
            buf.push(c);
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == q {
                quote = None;
            }
            here.column += 1;
            continue;
        }
        match c {
            '#' => in_comment = true,
            ';' => flush(&mut buf, start, &mut statements),
            _ if c.is_whitespace() && buf.is_empty() => {}
            _ => {
                if buf.is_empty() {
                    start = here;
                }
                if c == '"' || c == '\'' {
                    quote = Some((c, here));
                }
                buf.push(c);
            }
        }
        here.column += 1;
    }
    if let Some((_, qpos)) = quote {
        return Err(qpos.error(SpecErrorKind::Syntax, "unterminated string"));
    }
    flush(&mut buf, start, &mut statements);
    Ok(statements)
}

/// Byte index of `needle` outside quoted regions.
fn find_unquoted(text: &str, needle: &str) -> Option<usize> {
    let mut quote: Option<char> = None;
    let mut escaped = false;
    for (i, c) in text.char_indices() {
        if let Some(q) = quote {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == q {
                quote = None;
            }
            continue;
        }
        if c == '"' || c == '\'' {
            quote = Some(c);
        } else if text[i..].starts_with(needle) {
            return Some(i);
        }
    }
    None
}

/// Split on commas outside quotes; returns (char offset, trimmed item).
fn split_unquoted_commas(text: &str) -> Vec<(usize, String)> {
    let mut items = Vec::new();
    let mut quote: Option<char> = None;
    let mut escaped = false;
    let mut current = String::new();
    let mut item_start = 0;
    for (ci, c) in text.chars().enumerate() {
        if let Some(q) = quote {
            current.push(c);
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == q {
                quote = None;
            }
            continue;
        }
        match c {
            '"' | '\'' => {
                quote = Some(c);
                current.push(c);
            }
            ',' => {
                items.push(trimmed_item(item_start, &current));
                current.clear();
                item_start = ci + 1;
            }
            _ => current.push(c),
        }
    }
    items.push(trimmed_item(item_start, &current));
    items
}

fn trimmed_item(start: usize, raw: &str) -> (usize, String) {
    let lead = raw.chars().take_while(|c| c.is_whitespace()).count();
    (start + lead, raw.trim().to_string())
}

/// Parse a quoted string at the start of `text`; returns the content and the
/// number of chars consumed.
fn unquote(text: &str) -> Option<(String, usize)> {
    let mut chars = text.chars();
    let q = chars.next().filter(|c| *c == '"' || *c == '\'')?;
    let mut out = String::new();
    let mut consumed = 1;
    let mut escaped = false;
    for c in chars {
        consumed += 1;
        if escaped {
            if c != q && c != '\\' {
                out.push('\\');
            }
            out.push(c);
            escaped = false;
        } else if c == '\\' {
            escaped = true;
        } else if c == q {
            return Some((out, consumed));
        } else {
            out.push(c);
        }
    }
    None
}

/// A pattern or term: quoted string, or the raw remainder of the value.
fn string_value(value: &str, pos: Pos) -> Result<String, SpecError> {
    if value.starts_with('"') || value.starts_with('\'') {
        let (s, consumed) = unquote(value)
            .ok_or_else(|| pos.error(SpecErrorKind::Syntax, "unterminated string"))?;
        let rest: String = value.chars().skip(consumed).collect();
        if !rest.trim().is_empty() {
            return Err(pos.offset(consumed).error(
                SpecErrorKind::Syntax,
                format!("unexpected {:?} after string", rest.trim()),
            ));
        }
        Ok(s)
    } else if value.is_empty() {
        Err(pos.error(SpecErrorKind::Syntax, "missing value"))
    } else {
        Ok(value.to_string())
    }
}

fn tuple_items(value: &str, pos: Pos) -> Result<Vec<(Pos, String)>, SpecError> {
    let inner = value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .ok_or_else(|| {
            pos.error(
                SpecErrorKind::MalformedTuple,
                format!("expected `[...]`, got {value:?}"),
            )
        })?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let items = split_unquoted_commas(inner);
    let mut out = Vec::with_capacity(items.len());
    for (offset, item) in items {
        let item_pos = pos.offset(1 + offset);
        if item.is_empty() {
            return Err(item_pos.error(SpecErrorKind::MalformedTuple, "empty tuple element"));
        }
        out.push((item_pos, item));
    }
    Ok(out)
}

fn expect_arity(
    items: &[(Pos, String)],
    allowed: &[usize],
    pos: Pos,
    what: &str,
) -> Result<(), SpecError> {
    if allowed.contains(&items.len()) {
        Ok(())
    } else {
        let want = allowed
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" or ");
        Err(pos.error(
            SpecErrorKind::Arity,
            format!("{what} takes {want} elements, got {}", items.len()),
        ))
    }
}

fn positive_int(text: &str, pos: Pos, what: &str) -> Result<usize, SpecError> {
    let n: usize = text.trim().parse().map_err(|_| {
        pos.error(
            SpecErrorKind::Domain,
            format!("{what} must be an integer, got {text:?}"),
        )
    })?;
    if n == 0 {
        return Err(pos.error(SpecErrorKind::Domain, format!("{what} must be >= 1")));
    }
    Ok(n)
}

fn keyword<T: Copy>(
    text: &str,
    pos: Pos,
    what: &str,
    options: &[(&str, T)],
) -> Result<T, SpecError> {
    let lower = text.trim().to_ascii_lowercase();
    options
        .iter()
        .find(|(k, _)| *k == lower)
        .map(|(_, v)| *v)
        .ok_or_else(|| {
            pos.error(
                SpecErrorKind::Domain,
                format!("{what}: unexpected value {:?}", text.trim()),
            )
        })
}

fn yes_no(text: &str, pos: Pos) -> Result<bool, SpecError> {
    keyword(
        text,
        pos,
        "expected YES or NO",
        &[
            ("yes", true),
            ("true", true),
            ("no", false),
            ("false", false),
        ],
    )
}

fn checked_regex(pattern: String, pos: Pos) -> Result<String, SpecError> {
    super::validate::anchored(&pattern)
        .map_err(|e| pos.error(SpecErrorKind::Regex, format!("{pattern:?}: {e}")))?;
    Ok(pattern)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    AnalysisUnit,
    SyntacticUnit,
    Normalize,
    Feature(FeatureName),
}

fn lookup_key(raw: &str) -> Option<Key> {
    let k: String = raw
        .trim()
        .chars()
        .map(|c| {
            if c == '-' || c.is_whitespace() {
                '_'
            } else {
                c.to_ascii_lowercase()
            }
        })
        .collect();
    Some(match k.as_str() {
        "analysis_unit" | "au" => Key::AnalysisUnit,
        "syntactic_unit" | "su" => Key::SyntacticUnit,
        "normalize_morphosyntactic_variants" | "normalize" => Key::Normalize,
        "pos_sequence" => Key::Feature(FeatureName::PosSequence),
        "pos_regex" => Key::Feature(FeatureName::PosRegex),
        "suffix_prefix" => Key::Feature(FeatureName::SuffixPrefix),
        "capitalization" => Key::Feature(FeatureName::Capitalization),
        "special_chars" => Key::Feature(FeatureName::SpecialChars),
        "context_window" => Key::Feature(FeatureName::ContextWindow),
        "poscontext" | "pos_context" => Key::Feature(FeatureName::PosContext),
        "head_directionality" => Key::Feature(FeatureName::HeadDirectionality),
        "ngram" | "n_gram" => Key::Feature(FeatureName::NGram),
        "semantic_similarity" => Key::Feature(FeatureName::SemanticSimilarity),
        "term_frequency" => Key::Feature(FeatureName::TermFrequency),
        "bm25_weight" => Key::Feature(FeatureName::Bm25Weight),
        "interarrival_delay" | "inter_arrival_delay" => {
            Key::Feature(FeatureName::InterArrivalDelay)
        }
        _ => return None,
    })
}

/// Parse one feature value; `Ok(None)` means the feature is switched off.
fn parse_feature(
    name: FeatureName,
    value: &str,
    pos: Pos,
) -> Result<Option<FeatureDecl>, SpecError> {
    let decl = match name {
        FeatureName::PosSequence => {
            return Ok(yes_no(value, pos)?.then_some(FeatureDecl::PosSequence));
        }
        FeatureName::TermFrequency => {
            return Ok(yes_no(value, pos)?.then_some(FeatureDecl::TermFrequency));
        }
        FeatureName::Bm25Weight => {
            return Ok(yes_no(value, pos)?.then_some(FeatureDecl::Bm25Weight));
        }
        FeatureName::PosRegex => FeatureDecl::PosRegex {
            pattern: checked_regex(string_value(value, pos)?, pos)?,
        },
        FeatureName::PosContext => FeatureDecl::PosContext {
            pattern: checked_regex(string_value(value, pos)?, pos)?,
        },
        FeatureName::SuffixPrefix => {
            let items = tuple_items(value, pos)?;
            expect_arity(&items, &[2, 3], pos, "Suffix_Prefix")?;
            let kind = keyword(
                &items[0].1,
                items[0].0,
                "expected Suffix or Prefix",
                &[("suffix", AffixKind::Suffix), ("prefix", AffixKind::Prefix)],
            )?;
            let length = positive_int(&items[1].1, items[1].0, "length")?;
            let pattern = match items.get(2) {
                None => None,
                Some((_, p)) if p.eq_ignore_ascii_case("null") => None,
                Some((p_pos, p)) => Some(checked_regex(string_value(p, *p_pos)?, *p_pos)?),
            };
            FeatureDecl::SuffixPrefix {
                kind,
                length,
                pattern,
            }
        }
        FeatureName::Capitalization => FeatureDecl::Capitalization {
            mode: keyword(
                value,
                pos,
                "expected First, All or Any",
                &[
                    ("first", CapitalizationMode::First),
                    ("all", CapitalizationMode::All),
                    ("any", CapitalizationMode::Any),
                ],
            )?,
        },
        FeatureName::SpecialChars => {
            let items = if value.starts_with('[') {
                tuple_items(value, pos)?
            } else {
                split_unquoted_commas(value)
                    .into_iter()
                    .map(|(o, s)| (pos.offset(o), s))
                    .collect()
            };
            let mut chars = Vec::with_capacity(items.len());
            for (item_pos, item) in items {
                let text = if item.starts_with('"') || item.starts_with('\'') {
                    string_value(&item, item_pos)?
                } else {
                    item
                };
                let mut it = text.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => chars.push(c),
                    _ => {
                        return Err(item_pos.error(
                            SpecErrorKind::Domain,
                            format!("expected a single character, got {text:?}"),
                        ))
                    }
                }
            }
            FeatureDecl::SpecialChars { chars }
        }
        FeatureName::ContextWindow => {
            let items = tuple_items(value, pos)?;
            expect_arity(&items, &[2], pos, "Context_Window")?;
            let width = positive_int(&items[0].1, items[0].0, "width")?;
            let scope = keyword(
                &items[1].1,
                items[1].0,
                "expected Sentence, Para or Document",
                &[
                    ("sentence", ContextScope::Sentence),
                    ("para", ContextScope::Para),
                    ("paragraph", ContextScope::Para),
                    ("document", ContextScope::Document),
                ],
            )?;
            FeatureDecl::ContextWindow { width, scope }
        }
        FeatureName::HeadDirectionality => FeatureDecl::HeadDirectionality {
            phrase: keyword(
                value,
                pos,
                "expected YES, NP or VP",
                &[
                    ("yes", PhraseFilter::Any),
                    ("any", PhraseFilter::Any),
                    ("np", PhraseFilter::Np),
                    ("vp", PhraseFilter::Vp),
                ],
            )?,
        },
        FeatureName::NGram => {
            let n = if value.starts_with('[') {
                let items = tuple_items(value, pos)?;
                expect_arity(&items, &[1], pos, "NGram")?;
                positive_int(&items[0].1, items[0].0, "n")?
            } else {
                positive_int(value, pos, "n")?
            };
            FeatureDecl::NGram { n }
        }
        FeatureName::SemanticSimilarity => FeatureDecl::SemanticSimilarity {
            reference: nonempty(string_value(value, pos)?, pos)?,
        },
        FeatureName::InterArrivalDelay => FeatureDecl::InterArrivalDelay {
            term: nonempty(string_value(value, pos)?, pos)?,
        },
    };
    Ok(Some(decl))
}

fn nonempty(s: String, pos: Pos) -> Result<String, SpecError> {
    if s.trim().is_empty() {
        Err(pos.error(SpecErrorKind::Domain, "empty term"))
    } else {
        Ok(s)
    }
}

// --- syntactic unit expressions -------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum SuTok {
    Open,
    Close,
    Str(String),
    Atom(String),
}

fn lex_su(value: &str, pos: Pos) -> Result<Vec<(Pos, SuTok)>, SpecError> {
    let chars: Vec<char> = value.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let here = pos.offset(i);
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' || c == '[' {
            out.push((here, SuTok::Open));
            i += 1;
        } else if c == ')' || c == ']' {
            out.push((here, SuTok::Close));
            i += 1;
        } else if c == '"' || c == '\'' {
            let rest: String = chars[i..].iter().collect();
            let (s, consumed) = unquote(&rest)
                .ok_or_else(|| here.error(SpecErrorKind::Syntax, "unterminated string"))?;
            out.push((here, SuTok::Str(s)));
            i += consumed;
        } else {
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() && !"()[]\"'".contains(chars[i]) {
                i += 1;
            }
            out.push((here, SuTok::Atom(chars[start..i].iter().collect())));
        }
    }
    Ok(out)
}

struct SuParser {
    toks: Vec<(Pos, SuTok)>,
    i: usize,
    end: Pos,
}

impl SuParser {
    fn peek(&self) -> Option<&SuTok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |(p, _)| *p)
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(SuTok::Atom(a)) if a.eq_ignore_ascii_case(kw))
    }

    fn next(&mut self) -> Option<SuTok> {
        let t = self.toks.get(self.i).map(|(_, t)| t.clone());
        self.i += 1;
        t
    }

    fn or(&mut self) -> Result<SuExpr, SpecError> {
        let mut left = self.and()?;
        while self.peek_keyword("or") {
            self.i += 1;
            let right = self.and()?;
            left = SuExpr::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<SuExpr, SpecError> {
        let mut left = self.unary()?;
        while self.peek_keyword("and") {
            self.i += 1;
            let right = self.unary()?;
            left = SuExpr::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<SuExpr, SpecError> {
        if self.peek_keyword("not") {
            self.i += 1;
            let inner = self.unary()?;
            return Ok(SuExpr::Not(Box::new(inner)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<SuExpr, SpecError> {
        let pos = self.pos();
        match self.next() {
            Some(SuTok::Open) => {
                let e = self.or()?;
                match self.next() {
                    Some(SuTok::Close) => Ok(e),
                    _ => Err(self.pos().error(SpecErrorKind::Syntax, "expected `)`")),
                }
            }
            Some(SuTok::Atom(a)) => {
                let lower = a.to_ascii_lowercase();
                match lower.as_str() {
                    "word" => Ok(SuExpr::Word),
                    "phrase" => Ok(SuExpr::Phrase),
                    "ngram" | "n-gram" | "n_gram" => Ok(SuExpr::NGram(self.ngram_size(pos)?)),
                    "pos" => {
                        if self.peek_keyword("regex") || self.peek_keyword("pattern") {
                            self.i += 1;
                            Ok(SuExpr::PosRegex(self.pattern()?))
                        } else {
                            Err(self
                                .pos()
                                .error(SpecErrorKind::Syntax, "expected `Regex` after `POS`"))
                        }
                    }
                    "pos_regex" | "posregex" | "pos-regex" => Ok(SuExpr::PosRegex(self.pattern()?)),
                    "regex" | "char_regex" | "charregex" => Ok(SuExpr::CharRegex(self.pattern()?)),
                    _ => Err(pos.error(
                        SpecErrorKind::Syntax,
                        format!("unknown syntactic unit {a:?}"),
                    )),
                }
            }
            Some(SuTok::Close) => Err(pos.error(SpecErrorKind::Syntax, "unexpected `)`")),
            Some(SuTok::Str(_)) => Err(pos.error(SpecErrorKind::Syntax, "unexpected string")),
            None => Err(pos.error(
                SpecErrorKind::Syntax,
                "incomplete syntactic unit expression",
            )),
        }
    }

    fn ngram_size(&mut self, pos: Pos) -> Result<usize, SpecError> {
        match (
            self.toks.get(self.i),
            self.toks.get(self.i + 1),
            self.toks.get(self.i + 2),
        ) {
            (Some((_, SuTok::Open)), Some((p, SuTok::Atom(n))), Some((_, SuTok::Close))) => {
                let n = positive_int(n, *p, "NGram size")?;
                self.i += 3;
                Ok(n)
            }
            (Some((p, SuTok::Atom(n))), _, _) if n.chars().all(|c| c.is_ascii_digit()) => {
                let n = positive_int(n, *p, "NGram size")?;
                self.i += 1;
                Ok(n)
            }
            _ => Err(pos.error(SpecErrorKind::Arity, "NGram requires a size, e.g. NGram(2)")),
        }
    }

    fn pattern(&mut self) -> Result<String, SpecError> {
        let pos = self.pos();
        let p = match self.next() {
            Some(SuTok::Str(s)) => s,
            Some(SuTok::Atom(a))
                if !["and", "or", "not"].contains(&a.to_ascii_lowercase().as_str()) =>
            {
                a
            }
            _ => return Err(pos.error(SpecErrorKind::Syntax, "expected a pattern")),
        };
        checked_regex(p, pos)
    }
}

fn parse_su(value: &str, pos: Pos) -> Result<SuExpr, SpecError> {
    let toks = lex_su(value, pos)?;
    if toks.is_empty() {
        return Err(pos.error(SpecErrorKind::Syntax, "missing syntactic unit"));
    }
    let mut p = SuParser {
        toks,
        i: 0,
        end: pos.offset(value.chars().count()),
    };
    let expr = p.or()?;
    if p.i < p.toks.len() {
        return Err(p
            .pos()
            .error(SpecErrorKind::Syntax, "unexpected trailing input"));
    }
    if !expr.is_positive() {
        return Err(pos.error(
            SpecErrorKind::Syntax,
            "NOT must be used in conjunction with another operator",
        ));
    }
    check_su_regexes(&expr).map_err(|m| pos.error(SpecErrorKind::Regex, m))?;
    Ok(expr)
}

/// Parse nlpFSpL source text into a validated [`FeatureSpec`].
///
/// Omitted meta elements default to Sentence analysis unit, Word syntactic
/// unit and no variant normalization. A spec without features parses; use
/// [`validate`](super::validate) to flag it.
pub fn parse(source: &str) -> Result<FeatureSpec, SpecError> {
    let mut meta = MetaBlock::default();
    let mut features: Vec<(Pos, FeatureDecl)> = Vec::new();
    let mut seen: HashMap<Key, Pos> = HashMap::new();

    for stmt in split_statements(source)? {
        let Some(eq) = find_unquoted(&stmt.text, ":=") else {
            return Err(stmt
                .pos
                .error(SpecErrorKind::Syntax, "expected `Key := Value`"));
        };
        let raw_key = &stmt.text[..eq];
        let key = lookup_key(raw_key).ok_or_else(|| {
            stmt.pos
                .error(SpecErrorKind::UnknownKey, format!("{:?}", raw_key.trim()))
        })?;
        let after = &stmt.text[eq + 2..];
        let lead = after.chars().take_while(|c| c.is_whitespace()).count();
        let value = after.trim();
        let value_pos = stmt.pos.offset(stmt.text[..eq].chars().count() + 2 + lead);

        if let Some(prev) = seen.insert(key, stmt.pos) {
            return Err(stmt.pos.error(
                SpecErrorKind::Duplicate,
                format!("{} already declared at line {}", raw_key.trim(), prev.line),
            ));
        }

        match key {
            Key::AnalysisUnit => {
                meta.analysis_unit = keyword(
                    value,
                    value_pos,
                    "expected Corpus, Document, Para or Sentence",
                    &[
                        ("corpus", AnalysisUnit::Corpus),
                        ("document", AnalysisUnit::Document),
                        ("para", AnalysisUnit::Para),
                        ("paragraph", AnalysisUnit::Para),
                        ("sentence", AnalysisUnit::Sentence),
                    ],
                )?
            }
            Key::SyntacticUnit => meta.syntactic_unit = parse_su(value, value_pos)?,
            Key::Normalize => meta.normalize_variants = yes_no(value, value_pos)?,
            Key::Feature(name) => {
                if let Some(decl) = parse_feature(name, value, value_pos)? {
                    check_params(&decl).map_err(|m| value_pos.error(SpecErrorKind::Domain, m))?;
                    features.push((stmt.pos, decl));
                }
            }
        }
    }

    let has_window = features
        .iter()
        .any(|(_, f)| f.name() == FeatureName::ContextWindow);
    for (pos, decl) in &features {
        if decl.name() == FeatureName::PosContext && !has_window {
            return Err(pos.error(
                SpecErrorKind::Dependency,
                "POSContext requires Context_Window",
            ));
        }
        if let Err(message) = check_association(decl.name(), meta.analysis_unit) {
            return Err(pos.error(
                SpecErrorKind::Incompatible,
                format!("{} {message}", decl.name()),
            ));
        }
    }

    Ok(FeatureSpec {
        meta,
        features: features.into_iter().map(|(_, f)| f).collect(),
    })
}
