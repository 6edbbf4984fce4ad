use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::TAG_PREFIX;

const ENGLISH: &str = include_str!("../../resources/stopwords_en.txt");

/// A set of terms removed before modelling.
#[derive(Debug, Clone, Default)]
pub struct Stoplist(HashSet<String>);

impl Stoplist {
    /// The bundled English list (179 terms).
    pub fn english() -> Self {
        Self::parse(ENGLISH)
    }

    /// Newline-delimited UTF-8 list; blank lines and `#` comments ignored.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn parse(text: &str) -> Self {
        Stoplist(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn contains(&self, term: &str) -> bool {
        self.0.contains(term)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for Stoplist {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Stoplist(iter.into_iter().map(Into::into).collect())
    }
}

/// Drops stop words and single-character punctuation tokens. Tokens carrying
/// the reserved tag prefix always survive.
pub fn strip_stopwords_punct(tokens: &[String], stoplist: &Stoplist) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| {
            if t.starts_with(TAG_PREFIX) {
                return true;
            }
            if t.is_empty() || stoplist.contains(t) {
                return false;
            }
            let mut chars = t.chars();
            !matches!((chars.next(), chars.next()), (Some(c), None) if !c.is_alphanumeric())
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn bundled_list_is_complete() {
        let list = Stoplist::english();
        assert_eq!(list.len(), 179);
        for w in ["for", "what", "does", "this", "do", "if", "while", "o"] {
            assert!(list.contains(w), "{w}");
        }
        for w in ["print", "else", "loop", "modulo"] {
            assert!(!list.contains(w), "{w}");
        }
    }

    #[test]
    fn keeps_tags_and_content_words() {
        let list = Stoplist::english();
        let input = toks(&["tag_for", "what", "does", "this", "for", "loop", "do"]);
        // set-membership oracle
        let expected: Vec<String> = input
            .iter()
            .filter(|t| t.starts_with("tag_") || !ENGLISH.lines().any(|l| l == t.as_str()))
            .cloned()
            .collect();
        assert_eq!(expected, toks(&["tag_for", "loop"]));
        assert_eq!(strip_stopwords_punct(&input, &list), expected);
    }

    #[test]
    fn edge_cases() {
        let list = Stoplist::english();
        assert!(strip_stopwords_punct(&[], &list).is_empty());
        assert_eq!(
            strip_stopwords_punct(&toks(&["tag_bigo"]), &list),
            toks(&["tag_bigo"])
        );
        assert_eq!(
            strip_stopwords_punct(&toks(&["%", ";", "x", "7", "tag_if"]), &list),
            toks(&["x", "7", "tag_if"])
        );
    }
}
