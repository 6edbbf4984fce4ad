use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::tokenize::tokenize;
use super::TAG_PREFIX;

/// Where a rule's surface forms must appear for the rule to fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagContext {
    /// Only inside lines classified as code.
    CodeExcerpt,
    Anywhere,
}

/// One way a tagged concept can be written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceForm {
    /// A contiguous run of tokens, compared after tokenization
    /// (`"big-o"` and `"big O"` are both `["big", "o"]`).
    Phrase(Vec<String>),
    /// A single non-alphanumeric character matched in the raw text.
    Symbol(char),
    /// A word immediately followed by `(`, at a word boundary: `o(` matches
    /// `O(n log n)` but not `foo(x)`.
    Call(String),
}

impl SurfaceForm {
    /// Parses the config notation: a lone punctuation character is a
    /// symbol, `word(` is a call, anything else is a phrase.
    pub fn parse(form: &str) -> Result<Self> {
        let form = form.trim();
        let mut chars = form.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            if !c.is_alphanumeric() {
                return Ok(SurfaceForm::Symbol(c));
            }
        }
        if let Some(name) = form.strip_suffix('(') {
            let name = name.to_lowercase();
            if !name.is_empty() && name.chars().all(char::is_alphanumeric) {
                return Ok(SurfaceForm::Call(name));
            }
        }
        let words = tokenize(form);
        if words.is_empty() {
            return Err(Error::Lexicon(format!(
                "surface form {form:?} has no matchable content"
            )));
        }
        Ok(SurfaceForm::Phrase(words))
    }

    fn notation(&self) -> String {
        match self {
            SurfaceForm::Phrase(words) => words.join(" "),
            SurfaceForm::Symbol(c) => c.to_string(),
            SurfaceForm::Call(name) => format!("{name}("),
        }
    }

    /// Occurrences within `text`, whose tokenization is `tokens`.
    pub(crate) fn count(&self, text: &str, tokens: &[String]) -> usize {
        match self {
            SurfaceForm::Phrase(words) => {
                if words.len() > tokens.len() {
                    return 0;
                }
                tokens
                    .windows(words.len())
                    .filter(|w| *w == words.as_slice())
                    .count()
            }
            SurfaceForm::Symbol(c) => text.matches(*c).count(),
            SurfaceForm::Call(name) => {
                let lower = text.to_lowercase();
                lower
                    .match_indices(name.as_str())
                    .filter(|&(i, m)| {
                        let before_ok = lower[..i]
                            .chars()
                            .next_back()
                            .is_none_or(|c| !(c.is_alphanumeric() || c == '_'));
                        before_ok && lower[i + m.len()..].starts_with('(')
                    })
                    .count()
            }
        }
    }
}

/// A domain keyword, its variants, and the context in which it is tagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagRule {
    tag_name: String,
    surface_forms: Vec<SurfaceForm>,
    context: TagContext,
}

impl TagRule {
    pub fn new(tag_name: &str, forms: &[&str], context: TagContext) -> Result<Self> {
        if tag_name.is_empty()
            || !tag_name
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
        {
            return Err(Error::Lexicon(format!(
                "tag name {tag_name:?} must be non-empty lowercase ASCII letters and digits"
            )));
        }
        if forms.is_empty() {
            return Err(Error::Lexicon(format!(
                "tag {tag_name:?} has no surface forms"
            )));
        }
        let surface_forms = forms
            .iter()
            .map(|f| SurfaceForm::parse(f))
            .collect::<Result<_>>()?;
        Ok(Self {
            tag_name: tag_name.to_owned(),
            surface_forms,
            context,
        })
    }

    pub fn tag_name(&self) -> &str {
        &self.tag_name
    }

    pub fn surface_forms(&self) -> &[SurfaceForm] {
        &self.surface_forms
    }

    pub fn context(&self) -> TagContext {
        self.context
    }

    /// The reserved token written into tagged documents, e.g. `tag_bigo`.
    pub fn emitted_token(&self) -> String {
        format!("{TAG_PREFIX}{}", self.tag_name)
    }
}

/// Tag rules plus the keyword set used to recognise code lines.
#[derive(Debug, Clone, PartialEq)]
pub struct TagLexicon {
    rules: Vec<TagRule>,
    code_keywords: BTreeSet<String>,
    code_line_threshold: u32,
}

pub const DEFAULT_CODE_LINE_THRESHOLD: u32 = 2;

const DEFAULT_CODE_KEYWORDS: &[&str] = &[
    "bool", "break", "case", "char", "class", "const", "continue", "def", "do", "double", "elif",
    "else", "elseif", "false", "float", "for", "function", "if", "import", "in", "int", "len",
    "let", "new", "none", "null", "print", "printf", "println", "public", "range", "return",
    "static", "switch", "true", "var", "void", "while",
];

impl TagLexicon {
    pub fn new(
        rules: Vec<TagRule>,
        code_keywords: impl IntoIterator<Item = impl Into<String>>,
        code_line_threshold: u32,
    ) -> Result<Self> {
        let mut names = HashSet::new();
        for rule in &rules {
            if !names.insert(rule.tag_name.as_str()) {
                return Err(Error::Lexicon(format!(
                    "duplicate tag name {:?}",
                    rule.tag_name
                )));
            }
        }
        if code_line_threshold == 0 {
            return Err(Error::Lexicon(
                "code line threshold must be at least 1".into(),
            ));
        }
        Ok(Self {
            rules,
            code_keywords: code_keywords
                .into_iter()
                .map(|k| k.into().to_lowercase())
                .collect(),
            code_line_threshold,
        })
    }

    /// The eight-tag computer-science lexicon: code keywords gated on code
    /// context, `bigo` and `modulo` matched anywhere.
    pub fn default_cs() -> Self {
        use TagContext::*;
        let rule = |name: &str, forms: &[&str], ctx| {
            TagRule::new(name, forms, ctx).expect("built-in rule")
        };
        let rules = vec![
            rule("bigo", &["bigo", "big-o", "o("], Anywhere),
            rule("modulo", &["mod", "modulo", "%"], Anywhere),
            rule("for", &["for"], CodeExcerpt),
            rule("if", &["if"], CodeExcerpt),
            rule("while", &["while"], CodeExcerpt),
            rule("else", &["else"], CodeExcerpt),
            rule("elseif", &["elseif", "else if", "elif"], CodeExcerpt),
            rule("print", &["print", "printf", "println"], CodeExcerpt),
        ];
        Self::new(
            rules,
            DEFAULT_CODE_KEYWORDS.iter().copied(),
            DEFAULT_CODE_LINE_THRESHOLD,
        )
        .expect("built-in lexicon")
    }

    pub fn rules(&self) -> &[TagRule] {
        &self.rules
    }

    pub fn code_keywords(&self) -> &BTreeSet<String> {
        &self.code_keywords
    }

    pub fn code_line_threshold(&self) -> u32 {
        self.code_line_threshold
    }

    pub fn rule(&self, tag_name: &str) -> Option<&TagRule> {
        self.rules.iter().find(|r| r.tag_name == tag_name)
    }

    /// Reads a TOML lexicon file.
    ///
    /// ```toml
    /// code_keywords = ["for", "in", "range", "print"]
    /// code_line_threshold = 2
    ///
    /// [[rule]]
    /// tag = "modulo"
    /// context = "anywhere"
    /// forms = ["mod", "modulo", "%"]
    /// ```
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: LexiconFile = toml::from_str(text).map_err(|e| Error::Lexicon(e.to_string()))?;
        let rules = file
            .rule
            .iter()
            .map(|r| {
                let forms: Vec<&str> = r.forms.iter().map(String::as_str).collect();
                TagRule::new(&r.tag, &forms, r.context)
            })
            .collect::<Result<Vec<_>>>()?;
        let keywords = file.code_keywords.unwrap_or_else(|| {
            DEFAULT_CODE_KEYWORDS
                .iter()
                .map(|s| s.to_string())
                .collect()
        });
        Self::new(
            rules,
            keywords,
            file.code_line_threshold
                .unwrap_or(DEFAULT_CODE_LINE_THRESHOLD),
        )
    }

    pub fn to_toml(&self) -> String {
        let file = LexiconFile {
            code_keywords: Some(self.code_keywords.iter().cloned().collect()),
            code_line_threshold: Some(self.code_line_threshold),
            rule: self
                .rules
                .iter()
                .map(|r| RuleEntry {
                    tag: r.tag_name.clone(),
                    context: r.context,
                    forms: r.surface_forms.iter().map(SurfaceForm::notation).collect(),
                })
                .collect(),
        };
        toml::to_string(&file).expect("lexicon serializes")
    }
}

impl Default for TagLexicon {
    fn default() -> Self {
        Self::default_cs()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconFile {
    code_keywords: Option<Vec<String>>,
    code_line_threshold: Option<u32>,
    #[serde(default)]
    rule: Vec<RuleEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleEntry {
    tag: String,
    context: TagContext,
    forms: Vec<String>,
}
