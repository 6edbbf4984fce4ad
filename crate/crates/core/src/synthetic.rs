//! Corpora sampled from a known LDA process, for checking that estimators
//! and samplers recover planted structure.

use rand_distr::{Distribution, Gamma, Poisson};

use crate::error::{Error, Result};
use crate::preprocess::{BowCorpus, BowDoc, Vocabulary};
use crate::rng::{self, SeededRng};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub topics: usize,
    pub vocab_size: usize,
    pub documents: usize,
    /// Mean document length; lengths are Poisson, at least 1.
    pub mean_tokens: f64,
    pub alpha: f64,
    pub eta: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            topics: 6,
            vocab_size: 60,
            documents: 600,
            mean_tokens: 40.0,
            alpha: 0.1,
            eta: 0.05,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub corpus: BowCorpus,
    /// True topic-word distributions, one row per topic.
    pub topics: Vec<Vec<f64>>,
    /// Dominant true topic of each document.
    pub dominant: Vec<usize>,
}

/// Symmetric Dirichlet draw. If every gamma variate underflows to zero (tiny
/// concentrations), all mass goes to one uniformly chosen coordinate.
pub fn symmetric_dirichlet(rng: &mut SeededRng, concentration: f64, dim: usize) -> Vec<f64> {
    let gamma = Gamma::new(concentration, 1.0).expect("positive concentration");
    let mut draw: Vec<f64> = (0..dim).map(|_| gamma.sample(rng)).collect();
    let total: f64 = draw.iter().sum();
    if total > 0.0 {
        draw.iter_mut().for_each(|x| *x /= total);
    } else {
        let hot = rng::index(rng, dim);
        draw.iter_mut()
            .enumerate()
            .for_each(|(i, x)| *x = (i == hot) as u8 as f64);
    }
    draw
}

fn draw_from(rng: &mut SeededRng, probs: &[f64]) -> usize {
    rng::categorical(rng, probs, probs.iter().sum())
}

pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    if spec.topics == 0 || spec.vocab_size == 0 || spec.documents == 0 {
        return Err(Error::InvalidArgument(
            "synthetic corpus dimensions must be positive".into(),
        ));
    }
    if !(spec.alpha > 0.0 && spec.eta > 0.0 && spec.mean_tokens > 0.0) {
        return Err(Error::InvalidArgument(
            "synthetic concentrations and length must be positive".into(),
        ));
    }
    let mut rng = rng::seeded(spec.seed);
    let topics: Vec<Vec<f64>> = (0..spec.topics)
        .map(|_| symmetric_dirichlet(&mut rng, spec.eta, spec.vocab_size))
        .collect();
    let lengths = Poisson::new(spec.mean_tokens).expect("positive mean");

    let mut docs = Vec::with_capacity(spec.documents);
    let mut dominant = Vec::with_capacity(spec.documents);
    for _ in 0..spec.documents {
        let theta = symmetric_dirichlet(&mut rng, spec.alpha, spec.topics);
        let n = (lengths.sample(&mut rng) as usize).max(1);
        let mut per_topic = vec![0usize; spec.topics];
        let words: Vec<usize> = (0..n)
            .map(|_| {
                let k = draw_from(&mut rng, &theta);
                per_topic[k] += 1;
                draw_from(&mut rng, &topics[k])
            })
            .collect();
        dominant.push(crate::lda::argmax(
            &per_topic.iter().map(|&c| c as f64).collect::<Vec<_>>(),
        ));
        docs.push(BowDoc::from_indices(words));
    }

    let vocabulary: Vocabulary = (0..spec.vocab_size).map(|w| format!("w{w:02}")).collect();
    let ids = (1..=spec.documents).map(|i| format!("S{i}")).collect();
    Ok(SyntheticCorpus {
        corpus: BowCorpus::new(ids, vocabulary, docs)?,
        topics,
        dominant,
    })
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Greedy one-to-one matching of true topics to learned topics by cosine
/// similarity (globally best pair first). Returns the mean cosine over the
/// `min(true, learned)` matched pairs.
pub fn matched_cosine(truth: &[Vec<f64>], learned: &[Vec<f64>]) -> f64 {
    let mut pairs: Vec<(f64, usize, usize)> = truth
        .iter()
        .enumerate()
        .flat_map(|(i, t)| {
            learned
                .iter()
                .enumerate()
                .map(move |(j, l)| (cosine(t, l), i, j))
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut used_t = vec![false; truth.len()];
    let mut used_l = vec![false; learned.len()];
    let mut total = 0.0;
    let mut matched = 0;
    for (c, i, j) in pairs {
        if !used_t[i] && !used_l[j] {
            used_t[i] = true;
            used_l[j] = true;
            total += c;
            matched += 1;
        }
    }
    if matched == 0 {
        0.0
    } else {
        total / matched as f64
    }
}
