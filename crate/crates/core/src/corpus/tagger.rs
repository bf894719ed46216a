//! Lexicon and suffix-heuristic POS tagger used when input text carries no
//! gold annotations. It is intentionally crude.

const DETERMINERS: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "every", "each", "some", "any", "no",
    "another", "all", "both", "either", "neither",
];
const PREPOSITIONS: &[&str] = &[
    "of", "in", "on", "at", "by", "for", "from", "with", "about", "into", "through", "over",
    "after", "between", "under", "during", "without", "if", "than", "because", "while", "whether",
    "within", "across", "against", "among", "via", "per", "upon", "like", "as",
];
const CONJUNCTIONS: &[&str] = &["and", "or", "but", "nor", "yet"];
const PRONOUNS: &[&str] = &[
    "i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them",
];
const POSSESSIVES: &[&str] = &["my", "your", "his", "her", "its", "our", "their"];
const MODALS: &[&str] = &[
    "can", "could", "will", "would", "shall", "should", "may", "might", "must",
];
const ADVERBS: &[&str] = &[
    "not", "very", "also", "well", "too", "often", "always", "never", "before", "then", "there",
    "here", "again", "already", "only", "just", "still",
];
const WH_WORDS: &[(&str, &str)] = &[
    ("which", "WDT"),
    ("what", "WP"),
    ("who", "WP"),
    ("whom", "WP"),
    ("where", "WRB"),
    ("when", "WRB"),
    ("how", "WRB"),
    ("why", "WRB"),
];
const AUXILIARIES: &[(&str, &str, &str)] = &[
    ("be", "VB", "be"),
    ("is", "VBZ", "be"),
    ("are", "VBP", "be"),
    ("am", "VBP", "be"),
    ("was", "VBD", "be"),
    ("were", "VBD", "be"),
    ("been", "VBN", "be"),
    ("being", "VBG", "be"),
    ("have", "VBP", "have"),
    ("has", "VBZ", "have"),
    ("had", "VBD", "have"),
    ("having", "VBG", "have"),
    ("do", "VBP", "do"),
    ("does", "VBZ", "do"),
    ("did", "VBD", "do"),
];
const IRREGULAR_VERBS: &[(&str, &str)] = &[
    ("made", "make"),
    ("found", "find"),
    ("gave", "give"),
    ("given", "give"),
    ("took", "take"),
    ("taken", "take"),
    ("wrote", "write"),
    ("written", "write"),
    ("built", "build"),
    ("sent", "send"),
    ("told", "tell"),
    ("got", "get"),
    ("known", "know"),
    ("knew", "know"),
    ("seen", "see"),
    ("saw", "see"),
    ("brought", "bring"),
    ("thought", "think"),
    ("chose", "choose"),
    ("chosen", "choose"),
    ("ran", "run"),
    ("held", "hold"),
    ("led", "lead"),
    ("left", "leave"),
    ("meant", "mean"),
    ("kept", "keep"),
];
/// Base-form verbs the lemmatizer can restore inflections to.
const BASE_VERBS: &[&str] = &[
    "identify",
    "extract",
    "detect",
    "classify",
    "prepare",
    "predict",
    "recognize",
    "find",
    "determine",
    "measure",
    "analyze",
    "analyse",
    "diagnose",
    "receive",
    "start",
    "recover",
    "label",
    "tag",
    "mine",
    "rank",
    "recommend",
    "estimate",
    "compute",
    "generate",
    "annotate",
    "describe",
    "mention",
    "reference",
    "specify",
    "design",
    "train",
    "test",
    "evaluate",
    "summarize",
    "translate",
    "answer",
    "cluster",
    "segment",
    "parse",
    "resolve",
    "link",
    "maximize",
    "minimize",
    "improve",
    "assess",
    "monitor",
    "track",
    "discover",
    "infer",
    "locate",
    "retrieve",
    "filter",
    "group",
    "map",
    "score",
    "capture",
    "use",
    "apply",
    "announce",
    "report",
    "study",
    "worsen",
    "include",
    "contain",
    "involve",
    "occur",
    "interact",
    "bind",
    "express",
    "regulate",
    "inhibit",
    "activate",
    "publish",
    "post",
    "tweet",
    "share",
    "acquire",
    "merge",
    "launch",
    "hire",
    "resign",
    "appoint",
    "sell",
    "buy",
    "lose",
    "gain",
    "grow",
    "decline",
    "extend",
    "handle",
    "help",
    "need",
    "want",
    "make",
    "give",
    "take",
    "write",
    "build",
    "send",
    "tell",
    "get",
    "know",
    "see",
    "bring",
    "think",
    "choose",
    "run",
    "hold",
    "lead",
    "leave",
    "mean",
    "keep",
    "fix",
    "pass",
    "process",
    "focus",
    "match",
    "search",
    "reach",
    "catch",
    "watch",
];
/// Verbs that surface as VB when seen in base form (others default to nouns).
const VERB_PREFERRING: &[&str] = &[
    "identify",
    "extract",
    "detect",
    "classify",
    "prepare",
    "predict",
    "recognize",
    "find",
    "determine",
    "measure",
    "analyze",
    "analyse",
    "diagnose",
    "receive",
    "recover",
    "label",
    "recommend",
    "estimate",
    "compute",
    "generate",
    "annotate",
    "describe",
    "specify",
    "summarize",
    "translate",
    "resolve",
    "maximize",
    "minimize",
    "improve",
    "assess",
    "discover",
    "infer",
    "locate",
    "retrieve",
    "capture",
    "use",
    "apply",
    "announce",
    "include",
    "contain",
    "involve",
    "occur",
    "interact",
    "bind",
    "regulate",
    "inhibit",
    "activate",
    "publish",
    "acquire",
    "merge",
    "launch",
    "hire",
    "resign",
    "appoint",
    "sell",
    "buy",
    "lose",
    "gain",
    "grow",
    "make",
    "give",
    "take",
    "write",
    "build",
    "send",
    "tell",
    "get",
    "know",
    "see",
    "bring",
    "think",
    "choose",
];
/// Nouns that the suffix rules would otherwise tag as adjectives or verbs.
const NOUNS: &[&str] = &[
    "professional",
    "report",
    "study",
    "patient",
    "condition",
    "day",
    "history",
    "date",
    "dose",
    "seizure",
    "physician",
    "doctor",
    "initiation",
    "interaction",
    "interactions",
    "news",
    "data",
    "text",
    "event",
    "events",
    "individual",
    "official",
    "criminal",
    "chemical",
    "animal",
    "hospital",
    "manual",
    "proposal",
    "rival",
    "signal",
    "terminal",
    "material",
    "potential",
    "capital",
    "journal",
    "arrival",
    "approval",
    "referral",
    "thing",
    "string",
    "spring",
    "morning",
    "evening",
    "building",
    "meeting",
    "feeling",
    "wedding",
    "earnings",
    "ceiling",
    "king",
    "ring",
    "sibling",
    "need",
    "score",
    "rank",
    "process",
    "f1",
    "series",
    "species",
    "analysis",
    "basis",
    "diagnosis",
    "thesis",
];

pub fn is_auxiliary(lemma: &str) -> bool {
    matches!(lemma, "be" | "have" | "do")
}

/// Tag a single word. `sentence_initial` suppresses the capitalized-word
/// proper-noun rule; `prev_tag` lets `to`/modals select a base-form verb.
pub fn tag_word(word: &str, sentence_initial: bool, prev_tag: Option<&str>) -> String {
    if let Some(tag) = punctuation_tag(word) {
        return tag.to_string();
    }
    let lower = word.to_lowercase();
    let l = lower.as_str();

    if word.chars().any(|c| c.is_ascii_digit())
        && word
            .chars()
            .all(|c| c.is_ascii_digit() || ",./:-".contains(c))
    {
        return "CD".into();
    }
    if l == "to" {
        return "TO".into();
    }
    if l == "non" {
        return "AFX".into();
    }
    if let Some((_, tag, _)) = AUXILIARIES.iter().find(|(w, _, _)| *w == l) {
        return (*tag).into();
    }
    if MODALS.contains(&l) {
        return "MD".into();
    }
    if DETERMINERS.contains(&l) {
        return "DT".into();
    }
    if PREPOSITIONS.contains(&l) {
        return "IN".into();
    }
    if CONJUNCTIONS.contains(&l) {
        return "CC".into();
    }
    if PRONOUNS.contains(&l) {
        return "PRP".into();
    }
    if POSSESSIVES.contains(&l) {
        return "PRP$".into();
    }
    if let Some((_, tag)) = WH_WORDS.iter().find(|(w, _)| *w == l) {
        return (*tag).into();
    }
    if ADVERBS.contains(&l) {
        return "RB".into();
    }
    let after_to = matches!(prev_tag, Some("TO" | "MD"));
    if after_to && BASE_VERBS.contains(&l) {
        return "VB".into();
    }
    if NOUNS.contains(&l) {
        return "NN".into();
    }
    if VERB_PREFERRING.contains(&l) {
        return "VB".into();
    }
    if IRREGULAR_VERBS.iter().any(|(w, _)| *w == l) {
        return "VBD".into();
    }

    let has_letter = word.chars().any(char::is_alphabetic);
    let all_caps = has_letter
        && word
            .chars()
            .filter(|c| c.is_alphabetic())
            .all(char::is_uppercase);
    if all_caps && word.chars().filter(|c| c.is_alphabetic()).count() > 1 {
        return "NNP".into();
    }
    if !sentence_initial && word.chars().next().is_some_and(char::is_uppercase) {
        return "NNP".into();
    }

    if l.len() > 4 && l.ends_with("ing") {
        return "VBG".into();
    }
    if l.len() > 3 && l.ends_with("ed") {
        return "VBN".into();
    }
    if l.len() > 3 && l.ends_with("ly") {
        return "RB".into();
    }
    const ADJ_SUFFIXES: &[&str] = &[
        "ous", "ful", "ive", "able", "ible", "al", "ic", "less", "ary", "ent", "ant",
    ];
    if l.len() > 4 && ADJ_SUFFIXES.iter().any(|s| l.ends_with(s)) {
        return "JJ".into();
    }
    if l.len() > 3 && l.ends_with('s') && !l.ends_with("ss") && !l.ends_with("us") {
        let stripped = strip_verb_suffix_s(l);
        if stripped.is_some_and(|b| VERB_PREFERRING.contains(&b.as_str())) {
            return "VBZ".into();
        }
        return "NNS".into();
    }
    "NN".into()
}

fn punctuation_tag(word: &str) -> Option<&'static str> {
    if word.chars().any(char::is_alphanumeric) {
        return None;
    }
    Some(match word {
        "." | "?" | "!" => ".",
        "," => ",",
        "-" | "–" | "—" => "HYPH",
        ":" | ";" | "..." => ":",
        "(" | "[" | "{" => "-LRB-",
        ")" | "]" | "}" => "-RRB-",
        "\"" | "“" | "``" => "``",
        "”" | "''" | "'" => "''",
        "$" => "$",
        "#" => "#",
        _ => "SYM",
    })
}

fn strip_verb_suffix_s(l: &str) -> Option<String> {
    if let Some(stem) = l.strip_suffix("ies") {
        return Some(format!("{stem}y"));
    }
    if let Some(stem) = l.strip_suffix("es") {
        if BASE_VERBS.contains(&stem) {
            return Some(stem.to_string());
        }
    }
    l.strip_suffix('s').map(str::to_string)
}

/// Reduce an inflected verb to its base form. Known base verbs are preferred;
/// otherwise the plain suffix-stripped form is returned.
/// Stems whose base form ends in a silent `e` (`automat-ed`, `us-ing`).
fn restores_e(stem: &str) -> bool {
    [
        "at", "iz", "yz", "bl", "ut", "uc", "us", "ur", "rc", "v", "ag",
    ]
    .iter()
    .any(|end| stem.ends_with(end))
}

pub fn lemmatize_verb(word: &str) -> String {
    let l = word.to_lowercase();
    if let Some((_, _, lemma)) = AUXILIARIES.iter().find(|(w, _, _)| *w == l) {
        return (*lemma).to_string();
    }
    if let Some((_, lemma)) = IRREGULAR_VERBS.iter().find(|(w, _)| *w == l) {
        return (*lemma).to_string();
    }
    if BASE_VERBS.contains(&l.as_str()) {
        return l;
    }

    let mut candidates: Vec<String> = Vec::new();
    if let Some(stem) = l.strip_suffix("ied") {
        candidates.push(format!("{stem}y"));
    }
    if let Some(stem) = l.strip_suffix("ies") {
        candidates.push(format!("{stem}y"));
    }
    for suffix in ["ed", "ing"] {
        if let Some(stem) = l.strip_suffix(suffix) {
            candidates.push(format!("{stem}e"));
            candidates.push(stem.to_string());
            if let Some(undoubled) = undouble(stem) {
                candidates.push(undoubled);
            }
        }
    }
    if let Some(stem) = l.strip_suffix("es") {
        candidates.push(stem.to_string());
    }
    if let Some(stem) = l.strip_suffix('s') {
        candidates.push(stem.to_string());
    }

    if let Some(known) = candidates.iter().find(|c| BASE_VERBS.contains(&c.as_str())) {
        return known.clone();
    }
    for suffix in ["ied", "ies"] {
        if let Some(stem) = l.strip_suffix(suffix) {
            return format!("{stem}y");
        }
    }
    for suffix in ["ing", "ed", "s"] {
        if let Some(stem) = l.strip_suffix(suffix) {
            if stem.len() >= 2 {
                if suffix != "s" && restores_e(stem) {
                    return format!("{stem}e");
                }
                return undouble(stem).unwrap_or_else(|| stem.to_string());
            }
        }
    }
    l
}

fn undouble(stem: &str) -> Option<String> {
    let bytes = stem.as_bytes();
    let n = bytes.len();
    if n >= 2 && bytes[n - 1] == bytes[n - 2] && !b"aeioulsz".contains(&bytes[n - 1]) {
        Some(stem[..n - 1].to_string())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_class_and_suffix_rules() {
        assert_eq!(tag_word("This", true, None), "DT");
        assert_eq!(tag_word("XYZ", false, Some("DT")), "NNP");
        assert_eq!(tag_word("non", false, None), "AFX");
        assert_eq!(tag_word("-", false, None), "HYPH");
        assert_eq!(tag_word("interventional", false, None), "JJ");
        assert_eq!(tag_word("professional", false, None), "NN");
        assert_eq!(tag_word("prepared", false, None), "VBN");
        assert_eq!(tag_word("is", false, None), "VBZ");
        assert_eq!(tag_word("procedures", false, None), "NNS");
        assert_eq!(tag_word("identifies", false, None), "VBZ");
        assert_eq!(tag_word("1900", false, None), "CD");
        assert_eq!(tag_word("unknownword", false, None), "NN");
        assert_eq!(tag_word(".", false, None), ".");
    }

    #[test]
    fn lemmas() {
        assert_eq!(lemmatize_verb("prepared"), "prepare");
        assert_eq!(lemmatize_verb("identifies"), "identify");
        assert_eq!(lemmatize_verb("identified"), "identify");
        assert_eq!(lemmatize_verb("running"), "run");
        assert_eq!(lemmatize_verb("diagnosed"), "diagnose");
        assert_eq!(lemmatize_verb("was"), "be");
        assert_eq!(lemmatize_verb("found"), "find");
        assert_eq!(lemmatize_verb("jumped"), "jump");
        assert_eq!(lemmatize_verb("automated"), "automate");
        assert_eq!(lemmatize_verb("using"), "use");
        assert_eq!(lemmatize_verb("solved"), "solve");
        assert!(is_auxiliary(&lemmatize_verb("has")));
    }
}
