use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::corpus::Document;

use super::lexicon::{TagContext, TagLexicon};
use super::tokenize::tokenize;

/// How many copies of a tag token a firing rule contributes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagMultiplicity {
    /// One token per distinct rule.
    #[default]
    Once,
    /// One token per matched occurrence.
    PerOccurrence,
}

const CODE_PUNCTUATION: &[char] = &[';', '{', '}', '(', ')', '='];

/// Scores one line with the code heuristic: one point each for code
/// punctuation, deep indentation, two or more code keywords, and a trailing
/// `:` or `{`.
pub fn code_line_score(line: &str, lexicon: &TagLexicon) -> u32 {
    let punctuation = line.contains(CODE_PUNCTUATION);
    let indented = line.starts_with("    ") || line.starts_with('\t');
    let keywords = tokenize(line)
        .iter()
        .filter(|t| lexicon.code_keywords().contains(t.as_str()))
        .count()
        >= 2;
    let opener = line.trim_end().ends_with([':', '{']);
    [punctuation, indented, keywords, opener]
        .iter()
        .filter(|&&b| b)
        .count() as u32
}

/// Maximal runs of consecutive code lines, as 0-based half-open line ranges.
pub fn detect_code_spans(raw_text: &str, lexicon: &TagLexicon) -> Vec<Range<usize>> {
    let mut spans = Vec::new();
    let mut start = None;
    let mut n_lines = 0;
    for (i, line) in raw_text.lines().enumerate() {
        n_lines = i + 1;
        let is_code = code_line_score(line, lexicon) >= lexicon.code_line_threshold();
        match (is_code, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                spans.push(s..i);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        spans.push(s..n_lines);
    }
    spans
}

/// Prepends a tag token for every rule whose surface forms occur in the
/// rule's context, recording the rule in `applied_tags`.
///
/// Rules already present in `applied_tags` are skipped, so applying the
/// lexicon twice is the same as applying it once. New tag tokens appear in
/// lexicon order ahead of the existing tokens.
pub fn apply_tags(doc: &Document, lexicon: &TagLexicon, multiplicity: TagMultiplicity) -> Document {
    let full_tokens = tokenize(&doc.raw_text);
    let spans = detect_code_spans(&doc.raw_text, lexicon);
    let code_text = if spans.is_empty() {
        String::new()
    } else {
        let lines: Vec<&str> = doc.raw_text.lines().collect();
        spans
            .iter()
            .map(|s| lines[s.clone()].join("\n"))
            .collect::<Vec<_>>()
            .join("\n\n")
    };
    let code_tokens = tokenize(&code_text);

    let mut out = doc.clone();
    let mut prefix = Vec::new();
    for rule in lexicon.rules() {
        if out.applied_tags.contains(rule.tag_name()) {
            continue;
        }
        let (text, tokens) = match rule.context() {
            TagContext::Anywhere => (doc.raw_text.as_str(), full_tokens.as_slice()),
            TagContext::CodeExcerpt => (code_text.as_str(), code_tokens.as_slice()),
        };
        let hits: usize = rule
            .surface_forms()
            .iter()
            .map(|f| f.count(text, tokens))
            .sum();
        if hits == 0 {
            continue;
        }
        let copies = match multiplicity {
            TagMultiplicity::Once => 1,
            TagMultiplicity::PerOccurrence => hits,
        };
        let token = rule.emitted_token();
        prefix.extend(std::iter::repeat_n(token, copies));
        out.applied_tags.insert(rule.tag_name().to_owned());
    }
    if !prefix.is_empty() {
        prefix.append(&mut out.tokens);
        out.tokens = prefix;
    }
    out
}
