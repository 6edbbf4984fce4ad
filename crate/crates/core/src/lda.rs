//! Latent Dirichlet allocation fitted by collapsed Gibbs sampling.
//!
//! Each token's topic is resampled from
//!
//! ```text
//! p(z = k | rest) ∝ (n_dk + α) · (n_kw + η) / (n_k + V·η)
//! ```
//!
//! with the token itself removed from the counts. `phi` and `theta` are the
//! smoothed count ratios averaged over every sweep after burn-in.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::preprocess::{BowCorpus, Vocabulary};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub topics: usize,
    /// Document-topic concentration; `None` means `1 / topics`.
    pub alpha: Option<f64>,
    /// Topic-word concentration.
    pub eta: f64,
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl LdaConfig {
    pub fn new(topics: usize) -> Self {
        Self {
            topics,
            alpha: None,
            eta: 0.01,
            iterations: 1000,
            burn_in: 500,
            seed: 0,
        }
    }

    /// Same settings with a different topic count.
    pub fn with_topics(&self, topics: usize) -> Self {
        Self {
            topics,
            ..self.clone()
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(1.0 / self.topics.max(1) as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.topics == 0 {
            return Err(Error::InvalidArgument(
                "LDA needs at least one topic".into(),
            ));
        }
        if !(self.alpha() > 0.0 && self.alpha().is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be positive, got {}",
                self.alpha()
            )));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "eta must be positive, got {}",
                self.eta
            )));
        }
        if self.iterations == 0 || self.burn_in >= self.iterations {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= burn_in < iterations, got burn_in={} iterations={}",
                self.burn_in, self.iterations
            )));
        }
        Ok(())
    }
}

impl Default for LdaConfig {
    fn default() -> Self {
        Self::new(10)
    }
}

/// Count vectors over topics for one (document, word) position.
#[derive(Debug, Clone, Copy)]
pub struct TopicCounts<'a> {
    /// Tokens of the document in each topic.
    pub doc_topic: &'a [i64],
    /// Corpus-wide count of the word in each topic.
    pub word_topic: &'a [i64],
    /// Total tokens in each topic.
    pub topic_total: &'a [i64],
}

#[inline]
fn conditional_weight(n_dk: f64, n_kw: f64, n_k: f64, alpha: f64, eta: f64, v_eta: f64) -> f64 {
    (n_dk + alpha) * (n_kw + eta) / (n_k + v_eta)
}

/// The normalized collapsed conditional over topics.
pub fn gibbs_conditional(
    counts: TopicCounts<'_>,
    alpha: f64,
    eta: f64,
    vocab_size: usize,
) -> Result<Vec<f64>> {
    let k = counts.doc_topic.len();
    if k == 0 || counts.word_topic.len() != k || counts.topic_total.len() != k {
        return Err(Error::Contract(format!(
            "count vectors must share a positive length, got {}, {}, {}",
            k,
            counts.word_topic.len(),
            counts.topic_total.len()
        )));
    }
    if vocab_size == 0 {
        return Err(Error::Contract("vocabulary size must be at least 1".into()));
    }
    let all = counts
        .doc_topic
        .iter()
        .chain(counts.word_topic)
        .chain(counts.topic_total);
    if let Some(c) = all.copied().find(|&c| c < 0) {
        return Err(Error::Contract(format!("negative count {c}")));
    }
    if !(alpha > 0.0 && eta > 0.0) {
        return Err(Error::Contract(format!(
            "alpha and eta must be positive, got {alpha}, {eta}"
        )));
    }
    let v_eta = vocab_size as f64 * eta;
    let mut p: Vec<f64> = (0..k)
        .map(|t| {
            conditional_weight(
                counts.doc_topic[t] as f64,
                counts.word_topic[t] as f64,
                counts.topic_total[t] as f64,
                alpha,
                eta,
                v_eta,
            )
        })
        .collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    Ok(p)
}

/// A term and its probability under one topic.
#[derive(Debug, Clone, PartialEq)]
pub struct Keyword {
    pub term: String,
    pub probability: f64,
}

#[derive(Debug, Clone)]
pub struct LdaModel {
    config: LdaConfig,
    vocabulary: Vocabulary,
    doc_ids: Vec<String>,
    /// K×V row-major.
    phi: Vec<f64>,
    /// D×K row-major.
    theta: Vec<f64>,
    z: Vec<Vec<usize>>,
    warnings: Vec<String>,
}

impl LdaModel {
    pub fn config(&self) -> &LdaConfig {
        &self.config
    }

    pub fn topics(&self) -> usize {
        self.config.topics
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    /// Word distribution of `topic`.
    pub fn phi(&self, topic: usize) -> &[f64] {
        let v = self.vocabulary.len();
        &self.phi[topic * v..(topic + 1) * v]
    }

    /// Topic distribution of document `doc`.
    pub fn theta(&self, doc: usize) -> &[f64] {
        let k = self.config.topics;
        &self.theta[doc * k..(doc + 1) * k]
    }

    /// Final topic of every token, per document, in `BowDoc::tokens` order.
    pub fn z(&self) -> &[Vec<usize>] {
        &self.z
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Dominant topic of every document; ties go to the lower index.
    pub fn doc_topic_assignment(&self) -> Assignment {
        self.doc_ids
            .iter()
            .enumerate()
            .map(|(d, id)| (id.as_str(), argmax(self.theta(d))))
            .collect()
    }

    /// `theta[d][argmax]` for each document.
    pub fn top_topic_prob(&self, doc: usize) -> f64 {
        let row = self.theta(doc);
        row[argmax(row)]
    }

    /// The `n` most probable terms of `topic`, descending; ties broken
    /// alphabetically. `n` is clamped to the vocabulary size.
    pub fn top_keywords(&self, topic: usize, n: usize) -> Result<Vec<Keyword>> {
        if topic >= self.topics() {
            return Err(Error::TopicOutOfRange {
                topic,
                topics: self.topics(),
            });
        }
        Ok(rank_terms(self.phi(topic), &self.vocabulary, n))
    }

    /// Number of distinct topics that are some document's dominant topic.
    pub fn used_topic_count(&self) -> usize {
        self.doc_topic_assignment().used_topics().len()
    }
}

pub(crate) fn rank_terms(row: &[f64], vocabulary: &Vocabulary, n: usize) -> Vec<Keyword> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| {
        row[b]
            .total_cmp(&row[a])
            .then_with(|| vocabulary.term(a).cmp(&vocabulary.term(b)))
    });
    order
        .into_iter()
        .take(n)
        .map(|w| Keyword {
            term: vocabulary.term(w).unwrap_or_default().to_owned(),
            probability: row[w],
        })
        .collect()
}

/// Index of the largest entry, lowest index on ties.
pub fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in row.iter().enumerate().skip(1) {
        if x > row[best] {
            best = i;
        }
    }
    best
}

pub fn train_lda(corpus: &BowCorpus, config: &LdaConfig) -> Result<LdaModel> {
    config.validate()?;
    let v = corpus.vocabulary().len();
    let k = config.topics;
    let n_docs = corpus.len();
    if n_docs == 0 || v == 0 || corpus.total_tokens() == 0 {
        return Err(Error::EmptyCorpus);
    }

    let mut warnings = Vec::new();
    let total_tokens = corpus.total_tokens();
    if k > total_tokens {
        warnings.push(format!(
            "{k} topics exceed the corpus's {total_tokens} tokens"
        ));
    }
    for (d, doc) in corpus.docs().iter().enumerate() {
        if doc.total() == 0 {
            warnings.push(format!(
                "document {} has no tokens; uniform topic mix, assigned topic 0",
                corpus.doc_ids()[d]
            ));
        }
    }
    for w in &warnings {
        warn!("{w}");
    }

    let alpha = config.alpha();
    let eta = config.eta;
    let v_eta = v as f64 * eta;
    let words: Vec<Vec<usize>> = corpus.docs().iter().map(|d| d.tokens().collect()).collect();

    let mut rng = rng::seeded(config.seed);
    let mut n_dk = vec![0u32; n_docs * k];
    let mut n_kw = vec![0u32; k * v];
    let mut n_k = vec![0u32; k];
    let mut z: Vec<Vec<usize>> = words
        .iter()
        .enumerate()
        .map(|(d, doc)| {
            doc.iter()
                .map(|&w| {
                    let t = rng::index(&mut rng, k);
                    n_dk[d * k + t] += 1;
                    n_kw[t * v + w] += 1;
                    n_k[t] += 1;
                    t
                })
                .collect()
        })
        .collect();

    let mut phi_sum = vec![0.0f64; k * v];
    let mut theta_sum = vec![0.0f64; n_docs * k];
    let mut weights = vec![0.0f64; k];
    for sweep in 0..config.iterations {
        for (d, doc) in words.iter().enumerate() {
            let doc_counts = &mut n_dk[d * k..(d + 1) * k];
            for (i, &w) in doc.iter().enumerate() {
                let old = z[d][i];
                doc_counts[old] -= 1;
                n_kw[old * v + w] -= 1;
                n_k[old] -= 1;

                let mut total = 0.0;
                for t in 0..k {
                    let p = conditional_weight(
                        doc_counts[t] as f64,
                        n_kw[t * v + w] as f64,
                        n_k[t] as f64,
                        alpha,
                        eta,
                        v_eta,
                    );
                    weights[t] = p;
                    total += p;
                }
                let new = rng::categorical(&mut rng, &weights, total);

                doc_counts[new] += 1;
                n_kw[new * v + w] += 1;
                n_k[new] += 1;
                z[d][i] = new;
            }
        }

        if sweep >= config.burn_in {
            for t in 0..k {
                let denom = n_k[t] as f64 + v_eta;
                for w in 0..v {
                    phi_sum[t * v + w] += (n_kw[t * v + w] as f64 + eta) / denom;
                }
            }
            for (d, doc) in words.iter().enumerate() {
                let denom = doc.len() as f64 + k as f64 * alpha;
                for t in 0..k {
                    theta_sum[d * k + t] += (n_dk[d * k + t] as f64 + alpha) / denom;
                }
            }
        }
    }

    let kept = (config.iterations - config.burn_in) as f64;
    let phi = normalize_rows(phi_sum, v, kept);
    let theta = normalize_rows(theta_sum, k, kept);
    Ok(LdaModel {
        config: config.clone(),
        vocabulary: corpus.vocabulary().clone(),
        doc_ids: corpus.doc_ids().to_vec(),
        phi,
        theta,
        z,
        warnings,
    })
}

/// Divides by the sweep count, then renormalizes each row to absorb
/// floating-point drift from the running sums.
fn normalize_rows(mut sums: Vec<f64>, width: usize, kept: f64) -> Vec<f64> {
    for row in sums.chunks_mut(width) {
        row.iter_mut().for_each(|x| *x /= kept);
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|x| *x /= s);
    }
    sums
}
