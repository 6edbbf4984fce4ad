use indexmap::IndexSet;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::rng;

/// Dense bijection between terms and `0..len()`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    terms: IndexSet<String>,
}

impl Vocabulary {
    pub fn index(&self, term: &str) -> Option<usize> {
        self.terms.get_index_of(term)
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get_index(index).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for Vocabulary {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Vocabulary {
            terms: iter.into_iter().map(Into::into).collect(),
        }
    }
}

/// Collects distinct terms in first-occurrence order.
pub fn build_vocabulary<S: AsRef<str>>(docs: &[Vec<S>]) -> Result<Vocabulary> {
    let vocab: Vocabulary = docs
        .iter()
        .flatten()
        .map(|t| t.as_ref().to_owned())
        .collect();
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    Ok(vocab)
}

/// Sparse term counts of one document, sorted by term index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BowDoc {
    counts: Vec<(usize, u32)>,
}

impl BowDoc {
    /// Builds from `(term, count)` pairs; zero counts are dropped and
    /// repeated terms merged.
    pub fn from_counts(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut counts: Vec<(usize, u32)> = pairs.into_iter().filter(|&(_, c)| c > 0).collect();
        counts.sort_unstable_by_key(|&(w, _)| w);
        counts.dedup_by(|next, prev| {
            if next.0 == prev.0 {
                prev.1 += next.1;
                true
            } else {
                false
            }
        });
        BowDoc { counts }
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Self::from_counts(indices.into_iter().map(|w| (w, 1)))
    }

    pub fn counts(&self) -> &[(usize, u32)] {
        &self.counts
    }

    pub fn count(&self, term: usize) -> u32 {
        self.counts
            .binary_search_by_key(&term, |&(w, _)| w)
            .map(|i| self.counts[i].1)
            .unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|&(_, c)| c as usize).sum()
    }

    /// Expands counts into one term index per token.
    pub fn tokens(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .flat_map(|&(w, c)| std::iter::repeat_n(w, c as usize))
    }
}

/// Bag-of-words view of a corpus: the input to both topic models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BowCorpus {
    docs: Vec<BowDoc>,
    vocabulary: Vocabulary,
    doc_ids: Vec<String>,
}

impl BowCorpus {
    pub fn new(doc_ids: Vec<String>, vocabulary: Vocabulary, docs: Vec<BowDoc>) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        if docs.len() != doc_ids.len() {
            return Err(Error::Contract(format!(
                "{} documents but {} ids",
                docs.len(),
                doc_ids.len()
            )));
        }
        let v = vocabulary.len();
        if let Some((w, _)) = docs
            .iter()
            .flat_map(|d| d.counts.iter())
            .find(|&&(w, _)| w >= v)
        {
            return Err(Error::Contract(format!(
                "term index {w} outside vocabulary of {v}"
            )));
        }
        Ok(Self {
            docs,
            vocabulary,
            doc_ids,
        })
    }

    /// Builds the vocabulary from the corpus's token streams and counts them.
    pub fn from_corpus(corpus: &Corpus) -> Result<Self> {
        let token_lists: Vec<&[String]> = corpus
            .documents()
            .iter()
            .map(|d| d.tokens.as_slice())
            .collect();
        let vocabulary: Vocabulary = token_lists.iter().copied().flatten().cloned().collect();
        if vocabulary.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        to_bow(corpus, vocabulary)
    }

    pub fn docs(&self) -> &[BowDoc] {
        &self.docs
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn total_tokens(&self) -> usize {
        self.docs.iter().map(BowDoc::total).sum()
    }

    /// The first `n` documents, with the vocabulary re-indexed to the terms
    /// they use (first-occurrence order over the kept documents' indices).
    pub fn prefix(&self, n: usize) -> Result<BowCorpus> {
        if n == 0 || n > self.docs.len() {
            return Err(Error::PrefixOutOfRange {
                n,
                size: self.docs.len(),
            });
        }
        let mut remap: IndexSet<usize> = IndexSet::new();
        for doc in &self.docs[..n] {
            for &(w, _) in &doc.counts {
                remap.insert(w);
            }
        }
        let vocabulary = remap
            .iter()
            .map(|&w| self.vocabulary.term(w).expect("index in range").to_owned())
            .collect();
        let docs = self.docs[..n]
            .iter()
            .map(|d| {
                BowDoc::from_counts(
                    d.counts
                        .iter()
                        .map(|&(w, c)| (remap.get_index_of(&w).expect("term seen"), c)),
                )
            })
            .collect();
        BowCorpus::new(self.doc_ids[..n].to_vec(), vocabulary, docs)
    }

    /// Seeded reordering of documents; vocabulary is untouched.
    pub fn permute(&self, seed: u64) -> BowCorpus {
        let order = rng::permutation(self.docs.len(), seed);
        BowCorpus {
            docs: order.iter().map(|&i| self.docs[i].clone()).collect(),
            doc_ids: order.iter().map(|&i| self.doc_ids[i].clone()).collect(),
            vocabulary: self.vocabulary.clone(),
        }
    }
}

/// Counts each document's tokens against `vocabulary`.
pub fn to_bow(corpus: &Corpus, vocabulary: Vocabulary) -> Result<BowCorpus> {
    let mut docs = Vec::with_capacity(corpus.len());
    for doc in corpus.documents() {
        let mut indices = Vec::with_capacity(doc.tokens.len());
        for token in &doc.tokens {
            let w = vocabulary
                .index(token)
                .ok_or_else(|| Error::OutOfVocabulary {
                    token: token.clone(),
                    doc_id: doc.id.clone(),
                })?;
            indices.push(w);
        }
        docs.push(BowDoc::from_indices(indices));
    }
    let ids = corpus.ids().map(str::to_owned).collect();
    BowCorpus::new(ids, vocabulary, docs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;

    fn corpus_of(tokens: &[&[&str]]) -> Corpus {
        let docs = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut d = Document::new(format!("Q{}", i + 1), t.join(" "));
                d.tokens = t.iter().map(|s| s.to_string()).collect();
                d
            })
            .collect();
        Corpus::new("t", docs).unwrap()
    }

    #[test]
    fn first_occurrence_order() {
        let v = build_vocabulary(&[vec!["a", "b"], vec!["b", "c"]]).unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(
            (v.index("a"), v.index("b"), v.index("c")),
            (Some(0), Some(1), Some(2))
        );
        assert_eq!(build_vocabulary(&[vec!["a", "a", "a"]]).unwrap().len(), 1);
        assert!(matches!(
            build_vocabulary::<&str>(&[vec![], vec![]]),
            Err(Error::EmptyVocabulary)
        ));
    }

    #[test]
    fn bow_counts() {
        let c = corpus_of(&[&["a", "b", "b"], &[]]);
        let bow = BowCorpus::from_corpus(&c).unwrap();
        assert_eq!(bow.docs()[0].counts(), &[(0, 1), (1, 2)]);
        assert!(bow.docs()[1].counts().is_empty());
        assert_eq!(bow.len(), 2);
        assert_eq!(bow.total_tokens(), 3);
    }

    #[test]
    fn out_of_vocabulary_names_token_and_doc() {
        let c = corpus_of(&[&["a"], &["zzz"]]);
        let vocab: Vocabulary = ["a"].into_iter().collect();
        match to_bow(&c, vocab) {
            Err(Error::OutOfVocabulary { token, doc_id }) => {
                assert_eq!(token, "zzz");
                assert_eq!(doc_id, "Q2");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn prefix_reindexes_vocabulary() {
        let c = corpus_of(&[&["x", "y"], &["z", "y"], &["w"]]);
        let bow = BowCorpus::from_corpus(&c).unwrap().prefix(2).unwrap();
        assert_eq!(bow.vocabulary().iter().collect::<Vec<_>>(), ["x", "y", "z"]);
        assert_eq!(bow.doc_ids(), ["Q1", "Q2"]);
        let bow = BowCorpus::from_corpus(&c).unwrap();
        assert!(bow.prefix(4).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn token_lists() -> impl Strategy<Value = Vec<Vec<String>>> {
            prop::collection::vec(prop::collection::vec("[a-f]{1,2}", 0..12), 1..10)
        }

        proptest! {
            #[test]
            fn counts_preserve_totals(lists in token_lists()) {
                prop_assume!(lists.iter().any(|l| !l.is_empty()));
                let docs = lists.iter().enumerate().map(|(i, t)| {
                    let mut d = Document::new(format!("D{i}"), "");
                    d.tokens = t.clone();
                    d
                }).collect();
                let corpus = Corpus::new("p", docs).unwrap();
                let bow = BowCorpus::from_corpus(&corpus).unwrap();
                // counting oracle
                let expected: usize = lists.iter().map(Vec::len).sum();
                prop_assert_eq!(bow.total_tokens(), expected);
                for (doc, list) in bow.docs().iter().zip(&lists) {
                    prop_assert_eq!(doc.total(), list.len());
                    for &(w, c) in doc.counts() {
                        prop_assert!(c > 0);
                        let term = bow.vocabulary().term(w).unwrap();
                        prop_assert_eq!(c as usize, list.iter().filter(|t| *t == term).count());
                    }
                }
                for i in 0..bow.vocabulary().len() {
                    let term = bow.vocabulary().term(i).unwrap();
                    prop_assert_eq!(bow.vocabulary().index(term), Some(i));
                }
            }
        }
    }
}
