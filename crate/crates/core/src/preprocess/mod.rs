//! Tokenization, contextual domain tagging, stop-word removal and the
//! bag-of-words representation.
//!
//! Generic stop-word lists delete words such as `for`, `if` and `while`,
//! which carry meaning in programming questions. Tagging rescues them: when
//! a rule fires, a reserved `tag_*` token is prepended to the document, and
//! stop-word removal never touches reserved tokens. Code-keyword rules only
//! fire inside lines that look like code, so "for example" in prose stays
//! untagged.

mod lexicon;
mod stopwords;
mod tagging;
mod tokenize;
mod vocab;

pub use lexicon::{SurfaceForm, TagContext, TagLexicon, TagRule, DEFAULT_CODE_LINE_THRESHOLD};
pub use stopwords::{strip_stopwords_punct, Stoplist};
pub use tagging::{apply_tags, code_line_score, detect_code_spans, TagMultiplicity};
pub use tokenize::tokenize;
pub use vocab::{build_vocabulary, to_bow, BowCorpus, BowDoc, Vocabulary};

use crate::corpus::{Corpus, Document};

/// Prefix reserved for tag tokens. `tokenize` splits on `_`, so it can
/// never produce a token starting with this.
pub const TAG_PREFIX: &str = "tag_";

/// Full preprocessing: tokenize, optionally tag, then strip stop words.
#[derive(Debug, Clone)]
pub struct Preprocessor {
    pub lexicon: Option<TagLexicon>,
    pub stoplist: Stoplist,
    pub multiplicity: TagMultiplicity,
}

impl Preprocessor {
    pub fn tagged(lexicon: TagLexicon, stoplist: Stoplist) -> Self {
        Self {
            lexicon: Some(lexicon),
            stoplist,
            multiplicity: TagMultiplicity::Once,
        }
    }

    pub fn untagged(stoplist: Stoplist) -> Self {
        Self {
            lexicon: None,
            stoplist,
            multiplicity: TagMultiplicity::Once,
        }
    }

    pub fn with_multiplicity(mut self, multiplicity: TagMultiplicity) -> Self {
        self.multiplicity = multiplicity;
        self
    }

    pub fn process(&self, doc: &Document) -> Document {
        let mut out = doc.clone();
        out.tokens = tokenize(&doc.raw_text);
        out.applied_tags.clear();
        if let Some(lexicon) = &self.lexicon {
            out = apply_tags(&out, lexicon, self.multiplicity);
        }
        out.tokens = strip_stopwords_punct(&out.tokens, &self.stoplist);
        out
    }

    pub fn process_corpus(&self, corpus: &Corpus) -> Corpus {
        corpus.map_documents(|d| self.process(d))
    }
}
