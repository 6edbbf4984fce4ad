//! Hierarchical Dirichlet process topic model and the recursive topic-count
//! estimator built on it.
//!
//! The sampler is the truncated direct-assignment scheme: tokens carry a
//! topic label; global topic weights `w` are resampled after every sweep from
//! the Antoniak table counts, `(w_1..w_K, w_new) ~ Dir(m_1..m_K, γ)`. A token
//! picks existing topic `k` with weight
//!
//! ```text
//! (n_dk + α0·w_k) · (n_kw + β) / (n_k + V·β)
//! ```
//!
//! or a fresh topic with weight `α0·w_new / V`, which splits `w_new` by a
//! `Beta(1, γ)` stick break.
//!
//! Reported weights are token-mass shares. Each post-burn-in sweep's share
//! vector is sorted descending before averaging, so the average is immune to
//! label switching and comes out sorted.

use std::fmt;
use std::str::FromStr;

use log::{debug, warn};
use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::lda::LdaModel;
use crate::preprocess::BowCorpus;
use crate::rng::{self, SeededRng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HdpConfig {
    /// Top-level concentration γ.
    pub gamma: f64,
    /// Document-level concentration α0 (scales the global weights).
    pub alpha0: f64,
    /// Topic-word concentration β.
    pub beta_word: f64,
    /// Maximum number of simultaneously instantiated topics; `None` means
    /// `min(150, documents)`, floored at 2.
    pub k_max: Option<usize>,
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl Default for HdpConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            alpha0: 1.0,
            beta_word: 0.01,
            k_max: None,
            iterations: 1000,
            burn_in: 500,
            seed: 0,
        }
    }
}

impl HdpConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn k_max_for(&self, documents: usize) -> usize {
        self.k_max.unwrap_or_else(|| documents.clamp(2, 150))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("gamma", self.gamma),
            ("alpha0", self.alpha0),
            ("beta_word", self.beta_word),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if let Some(k) = self.k_max {
            if k < 2 {
                return Err(Error::InvalidArgument(format!(
                    "k_max must be at least 2, got {k}"
                )));
            }
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

#[derive(Debug, Clone)]
pub struct HdpPosterior {
    weights: Vec<f64>,
    phi: Vec<f64>,
    vocab_size: usize,
    z: Vec<Vec<usize>>,
    active_topics: usize,
    truncated: bool,
    config: HdpConfig,
}

impl HdpPosterior {
    /// Posterior-mean token-mass share per topic rank, length `k_max`,
    /// descending, summing to 1.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Word distribution of the final state's `rank`-th largest topic.
    /// Ranks past the instantiated topics hold the uniform prior mean.
    pub fn phi(&self, rank: usize) -> &[f64] {
        &self.phi[rank * self.vocab_size..(rank + 1) * self.vocab_size]
    }

    /// Final token labels, as ranks into `phi`.
    pub fn z(&self) -> &[Vec<usize>] {
        &self.z
    }

    /// Topics instantiated in the final sweep.
    pub fn active_topics(&self) -> usize {
        self.active_topics
    }

    /// Whether the sampler ever wanted a topic beyond `k_max`.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn config(&self) -> &HdpConfig {
        &self.config
    }

    pub fn k_max(&self) -> usize {
        self.weights.len()
    }
}

struct Sampler<'a> {
    words: &'a [Vec<usize>],
    vocab_size: usize,
    k_max: usize,
    alpha0: f64,
    gamma: f64,
    beta: f64,
    rng: SeededRng,
    /// Slot label of each token; `usize::MAX` before initialization.
    z: Vec<Vec<usize>>,
    /// D × k_max.
    n_dk: Vec<u32>,
    /// k_max × V.
    n_kw: Vec<u32>,
    n_k: Vec<u32>,
    weight: Vec<f64>,
    weight_new: f64,
    active: Vec<usize>,
    free: Vec<usize>,
    truncated: bool,
    scratch: Vec<f64>,
}

const UNASSIGNED: usize = usize::MAX;

impl<'a> Sampler<'a> {
    fn new(words: &'a [Vec<usize>], vocab_size: usize, k_max: usize, config: &HdpConfig) -> Self {
        Self {
            words,
            vocab_size,
            k_max,
            alpha0: config.alpha0,
            gamma: config.gamma,
            beta: config.beta_word,
            rng: rng::seeded(config.seed),
            z: words.iter().map(|d| vec![UNASSIGNED; d.len()]).collect(),
            n_dk: vec![0; words.len() * k_max],
            n_kw: vec![0; k_max * vocab_size],
            n_k: vec![0; k_max],
            weight: vec![0.0; k_max],
            weight_new: 1.0,
            active: Vec::with_capacity(k_max),
            free: (0..k_max).rev().collect(),
            truncated: false,
            scratch: Vec::with_capacity(k_max + 1),
        }
    }

    fn sweep(&mut self) {
        let v = self.vocab_size;
        let v_beta = v as f64 * self.beta;
        for d in 0..self.words.len() {
            for i in 0..self.words[d].len() {
                let w = self.words[d][i];
                let old = self.z[d][i];
                if old != UNASSIGNED {
                    self.n_dk[d * self.k_max + old] -= 1;
                    self.n_kw[old * v + w] -= 1;
                    self.n_k[old] -= 1;
                    if self.n_k[old] == 0 {
                        self.retire(old);
                    }
                }

                self.scratch.clear();
                let mut total = 0.0;
                for &k in &self.active {
                    let p = (self.n_dk[d * self.k_max + k] as f64 + self.alpha0 * self.weight[k])
                        * (self.n_kw[k * v + w] as f64 + self.beta)
                        / (self.n_k[k] as f64 + v_beta);
                    self.scratch.push(p);
                    total += p;
                }
                if self.active.len() < self.k_max {
                    let p = self.alpha0 * self.weight_new / v as f64;
                    self.scratch.push(p);
                    total += p;
                } else {
                    self.truncated = true;
                }

                let pick = rng::categorical(&mut self.rng, &self.scratch, total);
                let k = if pick == self.active.len() {
                    self.spawn()
                } else {
                    self.active[pick]
                };
                self.n_dk[d * self.k_max + k] += 1;
                self.n_kw[k * v + w] += 1;
                self.n_k[k] += 1;
                self.z[d][i] = k;
            }
        }
        self.resample_weights();
    }

    fn retire(&mut self, k: usize) {
        let pos = self
            .active
            .iter()
            .position(|&a| a == k)
            .expect("active topic");
        self.active.remove(pos);
        self.weight_new += self.weight[k];
        self.weight[k] = 0.0;
        self.free.push(k);
    }

    fn spawn(&mut self) -> usize {
        let k = self.free.pop().expect("free slot below k_max");
        let b: f64 = Beta::new(1.0, self.gamma)
            .expect("gamma > 0")
            .sample(&mut self.rng);
        self.weight[k] = b * self.weight_new;
        self.weight_new *= 1.0 - b;
        self.active.push(k);
        k
    }

    /// Samples table counts per (document, topic), then the global weights.
    fn resample_weights(&mut self) {
        let mut tables = vec![0u32; self.k_max];
        for d in 0..self.words.len() {
            for &k in &self.active {
                let n = self.n_dk[d * self.k_max + k];
                if n == 0 {
                    continue;
                }
                let a = self.alpha0 * self.weight[k];
                // First customer always opens a table.
                let mut m = 1;
                for j in 1..n {
                    if self.rng.random::<f64>() < a / (a + j as f64) {
                        m += 1;
                    }
                }
                tables[k] += m;
            }
        }
        let mut draws = Vec::with_capacity(self.active.len() + 1);
        for &k in &self.active {
            draws.push(gamma_draw(&mut self.rng, tables[k] as f64));
        }
        let residual = gamma_draw(&mut self.rng, self.gamma);
        let total: f64 = draws.iter().sum::<f64>() + residual;
        for (&k, g) in self.active.iter().zip(draws) {
            self.weight[k] = g / total;
        }
        self.weight_new = residual / total;
    }

    /// Token-mass shares of active topics, descending.
    fn sorted_shares(&self) -> Vec<(usize, f64)> {
        let total: f64 = self.active.iter().map(|&k| self.n_k[k] as f64).sum();
        let mut shares: Vec<(usize, f64)> = self
            .active
            .iter()
            .map(|&k| (k, self.n_k[k] as f64 / total))
            .collect();
        shares.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        shares
    }
}

fn gamma_draw(rng: &mut SeededRng, shape: f64) -> f64 {
    Gamma::new(shape, 1.0).expect("positive shape").sample(rng)
}

/// Fits the HDP and reports rank-sorted topic weights.
pub fn train_hdp(corpus: &BowCorpus, config: &HdpConfig) -> Result<HdpPosterior> {
    config.validate()?;
    if corpus.is_empty() || corpus.total_tokens() == 0 {
        return Err(Error::EmptyCorpus);
    }
    let k_max = config.k_max_for(corpus.len());
    let v = corpus.vocabulary().len();
    let words: Vec<Vec<usize>> = corpus.docs().iter().map(|d| d.tokens().collect()).collect();

    let mut sampler = Sampler::new(&words, v, k_max, config);
    // The first pass assigns tokens sequentially from an empty state.
    sampler.sweep();
    let mut share_sum = vec![0.0f64; k_max];
    for sweep in 0..config.iterations {
        sampler.sweep();
        if sweep >= config.burn_in {
            for (rank, (_, s)) in sampler.sorted_shares().into_iter().enumerate() {
                share_sum[rank] += s;
            }
        }
    }
    if sampler.truncated {
        warn!("HDP reached its truncation level of {k_max} topics");
    }

    let total: f64 = share_sum.iter().sum();
    let weights: Vec<f64> = share_sum.iter().map(|s| s / total).collect();

    let final_order = sampler.sorted_shares();
    let mut rank_of = vec![usize::MAX; k_max];
    let mut phi = vec![1.0 / v as f64; k_max * v];
    let v_beta = v as f64 * config.beta_word;
    for (rank, &(k, _)) in final_order.iter().enumerate() {
        rank_of[k] = rank;
        let denom = sampler.n_k[k] as f64 + v_beta;
        for w in 0..v {
            phi[rank * v + w] = (sampler.n_kw[k * v + w] as f64 + config.beta_word) / denom;
        }
    }
    let z = sampler
        .z
        .iter()
        .map(|doc| doc.iter().map(|&k| rank_of[k]).collect())
        .collect();
    debug!(
        "HDP fit: {} active topics, top weights {:?}",
        final_order.len(),
        &weights[..weights.len().min(8)]
    );

    Ok(HdpPosterior {
        weights,
        phi,
        vocab_size: v,
        z,
        active_topics: final_order.len(),
        truncated: sampler.truncated,
        config: config.clone(),
    })
}

/// Number of weights at or above `threshold`, floored at 1.
pub fn estimate_topic_count(weights: &[f64], threshold: f64) -> Result<usize> {
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-6 || weights.iter().any(|&w| w.is_nan() || w < 0.0) {
        return Err(Error::Contract(format!(
            "topic weights must be a distribution, sum is {sum}"
        )));
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold must lie in (0, 1], got {threshold}"
        )));
    }
    Ok(weights.iter().filter(|&&w| w >= threshold).count().max(1))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMode {
    /// Each level fits a fresh HDP.
    #[default]
    Rerun,
    /// Every level re-thresholds one posterior.
    Rethreshold,
}

impl fmt::Display for EstimateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimateMode::Rerun => "rerun",
            EstimateMode::Rethreshold => "rethreshold",
        })
    }
}

impl FromStr for EstimateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rerun" => Ok(EstimateMode::Rerun),
            "rethreshold" => Ok(EstimateMode::Rethreshold),
            other => Err(Error::InvalidArgument(format!(
                "unknown estimate mode {other:?} (expected rerun or rethreshold)"
            ))),
        }
    }
}

/// One level of the recursive estimator. The threshold is always the
/// reciprocal of a count (corpus size, then the previous estimate), so it is
/// stored as that count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimateLevel {
    pub threshold_denominator: usize,
    pub estimate: usize,
}

impl EstimateLevel {
    pub fn threshold(&self) -> f64 {
        1.0 / self.threshold_denominator as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EstimateChain {
    pub levels: Vec<EstimateLevel>,
    pub mode: EstimateMode,
    pub corpus_size: usize,
}

impl EstimateChain {
    /// The first-level (threshold `1/n`) estimate.
    pub fn hdp1(&self) -> usize {
        self.levels[0].estimate
    }

    /// The second-level estimate, if the chain has one.
    pub fn hdp2(&self) -> Option<usize> {
        self.levels.get(1).map(|l| l.estimate)
    }

    pub fn last(&self) -> usize {
        self.levels.last().expect("non-empty chain").estimate
    }

    pub fn estimates(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.estimate).collect()
    }
}

/// Applies thresholds `1/n, 1/x_1, 1/x_2, …` to one weight vector.
pub fn rethreshold_chain(
    weights: &[f64],
    corpus_size: usize,
    depth: usize,
) -> Result<EstimateChain> {
    check_chain_args(corpus_size, depth)?;
    let mut levels = Vec::with_capacity(depth);
    let mut denominator = corpus_size;
    for _ in 0..depth {
        let estimate = estimate_topic_count(weights, 1.0 / denominator as f64)?;
        levels.push(EstimateLevel {
            threshold_denominator: denominator,
            estimate,
        });
        denominator = estimate;
    }
    Ok(EstimateChain {
        levels,
        mode: EstimateMode::Rethreshold,
        corpus_size,
    })
}

fn check_chain_args(corpus_size: usize, depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(Error::InvalidArgument(
            "estimator depth must be at least 1".into(),
        ));
    }
    if corpus_size == 0 {
        return Err(Error::EmptyCorpus);
    }
    Ok(())
}

/// Recursive HDP topic-count estimate. Level 1 uses threshold `1/n` for `n`
/// documents; each later level uses `1/x` for the previous estimate `x`. In
/// rerun mode level `i` (0-based) fits with seed `config.seed + i`.
pub fn recursive_estimate(
    corpus: &BowCorpus,
    config: &HdpConfig,
    depth: usize,
    mode: EstimateMode,
) -> Result<EstimateChain> {
    check_chain_args(corpus.len(), depth)?;
    let n = corpus.len();
    match mode {
        EstimateMode::Rethreshold => {
            let posterior = train_hdp(corpus, config)?;
            rethreshold_chain(posterior.weights(), n, depth)
        }
        EstimateMode::Rerun => {
            let mut levels = Vec::with_capacity(depth);
            let mut denominator = n;
            for level in 0..depth {
                let posterior = train_hdp(
                    corpus,
                    &config.with_seed(config.seed.wrapping_add(level as u64)),
                )?;
                let estimate = estimate_topic_count(posterior.weights(), 1.0 / denominator as f64)?;
                levels.push(EstimateLevel {
                    threshold_denominator: denominator,
                    estimate,
                });
                denominator = estimate;
            }
            Ok(EstimateChain {
                levels,
                mode,
                corpus_size: n,
            })
        }
    }
}

/// Fraction of the `k_estimate` topics that are some document's dominant
/// topic.
pub fn efficiency_ratio(k_estimate: usize, model: &LdaModel) -> Result<f64> {
    if k_estimate == 0 {
        return Err(Error::InvalidArgument(
            "topic estimate must be at least 1".into(),
        ));
    }
    if model.topics() != k_estimate {
        return Err(Error::InvalidArgument(format!(
            "model has {} topics but the estimate is {k_estimate}",
            model.topics()
        )));
    }
    Ok(model.used_topic_count() as f64 / k_estimate as f64)
}

/// Topics holding at least `min_fraction` of all documents.
pub fn significant_topic_count(assignment: &Assignment, min_fraction: f64) -> Result<usize> {
    if !(min_fraction > 0.0 && min_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "min_fraction must lie in (0, 1), got {min_fraction}"
        )));
    }
    let total = assignment.len() as f64;
    let mut sizes = std::collections::BTreeMap::<usize, usize>::new();
    for (_, t) in assignment.iter() {
        *sizes.entry(t).or_default() += 1;
    }
    Ok(sizes
        .values()
        .filter(|&&s| s as f64 >= min_fraction * total)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::{BowDoc, Vocabulary};

    fn quick(seed: u64) -> HdpConfig {
        HdpConfig {
            iterations: 200,
            burn_in: 100,
            seed,
            ..HdpConfig::default()
        }
    }

    fn identical_docs(n: usize) -> BowCorpus {
        let vocab: Vocabulary = ["stack"].into_iter().collect();
        BowCorpus::new(
            (0..n).map(|i| format!("D{i}")).collect(),
            vocab,
            (0..n).map(|_| BowDoc::from_counts([(0, 1)])).collect(),
        )
        .unwrap()
    }

    /// Expected rank-sorted block shares of a Chinese restaurant process
    /// partition of `n` items, by enumerating every set partition and
    /// weighting it with the Ewens formula.
    fn ewens_sorted_shares(n: usize, gamma: f64) -> Vec<f64> {
        fn visit(labels: &mut Vec<usize>, n: usize, gamma: f64, acc: &mut Vec<f64>) {
            if labels.len() == n {
                let blocks = labels.iter().max().unwrap() + 1;
                let mut sizes = vec![0usize; blocks];
                labels.iter().for_each(|&l| sizes[l] += 1);
                let mut p = gamma.powi(blocks as i32);
                for &s in &sizes {
                    p *= (1..s).map(|j| j as f64).product::<f64>();
                }
                p /= (0..n).map(|j| gamma + j as f64).product::<f64>();
                sizes.sort_unstable_by(|a, b| b.cmp(a));
                for (r, &s) in sizes.iter().enumerate() {
                    acc[r] += p * s as f64 / n as f64;
                }
                return;
            }
            let next = labels.iter().max().map_or(0, |m| m + 1);
            for l in 0..=next {
                labels.push(l);
                visit(labels, n, gamma, acc);
                labels.pop();
            }
        }
        let mut acc = vec![0.0; n];
        visit(&mut Vec::new(), n, gamma, &mut acc);
        acc
    }

    #[test]
    fn single_word_corpus_matches_partition_oracle() {
        // With one vocabulary item the likelihood is flat and one-token
        // documents each seat one table, so the posterior over partitions of
        // the documents is the CRP(γ) prior.
        let expected = ewens_sorted_shares(6, 1.0);
        assert!((expected.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let config = HdpConfig {
            iterations: 40_000,
            burn_in: 1_000,
            ..quick(5)
        };
        let post = train_hdp(&identical_docs(6), &config).unwrap();
        for (got, want) in post.weights().iter().zip(&expected) {
            assert!(
                (got - want).abs() < 0.02,
                "{:?} vs {expected:?}",
                post.weights()
            );
        }
    }

    #[test]
    fn single_word_corpus_concentrates_for_small_gamma() {
        let expected = ewens_sorted_shares(8, 0.01);
        assert!(expected[0] > 0.97);
        let config = HdpConfig {
            gamma: 0.01,
            iterations: 500,
            burn_in: 250,
            ..quick(5)
        };
        let post = train_hdp(&identical_docs(20), &config).unwrap();
        assert!(post.weights()[0] >= 0.95, "{:?}", &post.weights()[..4]);
    }

    #[test]
    fn weights_are_sorted_distribution() {
        let post = train_hdp(&identical_docs(30), &quick(1)).unwrap();
        let w = post.weights();
        assert_eq!(w.len(), 30);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(w.windows(2).all(|p| p[0] >= p[1]));
        assert!(w.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn fits_are_deterministic() {
        let a = train_hdp(&identical_docs(15), &quick(9)).unwrap();
        let b = train_hdp(&identical_docs(15), &quick(9)).unwrap();
        assert_eq!(a.weights(), b.weights());
        assert_eq!(a.z(), b.z());
    }

    #[test]
    fn truncation_is_flagged() {
        let vocab: Vocabulary = (0..20).map(|i| format!("w{i}")).collect();
        let corpus = BowCorpus::new(
            (0..20).map(|i| format!("D{i}")).collect(),
            vocab,
            (0..20).map(|i| BowDoc::from_counts([(i, 5)])).collect(),
        )
        .unwrap();
        let config = HdpConfig {
            k_max: Some(2),
            gamma: 5.0,
            ..quick(3)
        };
        let post = train_hdp(&corpus, &config).unwrap();
        assert!(post.truncated());
        assert!(post.active_topics() <= 2);
        assert_eq!(post.weights().len(), 2);
    }

    #[test]
    fn count_above_threshold() {
        let w = [0.5, 0.3, 0.1, 0.06, 0.04];
        assert_eq!(estimate_topic_count(&w, 0.05).unwrap(), 4);
        assert_eq!(estimate_topic_count(&w, 0.9).unwrap(), 1);
        assert!(estimate_topic_count(&[0.5, 0.4], 0.1)
            .unwrap_err()
            .is_contract_violation());
        assert!(estimate_topic_count(&w, 0.0).is_err());
        let first: f64 = 1.0 / 1300.0;
        assert!((first - 0.000769).abs() < 1e-6);
    }

    #[test]
    fn hand_counted_chain() {
        let w = [0.4, 0.3, 0.2, 0.05, 0.03, 0.02];
        let chain = rethreshold_chain(&w, 100, 3).unwrap();
        let thresholds: Vec<usize> = chain
            .levels
            .iter()
            .map(|l| l.threshold_denominator)
            .collect();
        // 1/100 keeps all six; 1/6 keeps 0.4, 0.3, 0.2; 1/3 keeps only 0.4.
        assert_eq!(thresholds, [100, 6, 3]);
        assert_eq!(chain.estimates(), [6, 3, 1]);
    }

    #[test]
    fn zero_depth_is_rejected() {
        assert!(matches!(
            rethreshold_chain(&[1.0], 5, 0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(recursive_estimate(&identical_docs(3), &quick(0), 0, EstimateMode::Rerun).is_err());
    }

    #[test]
    fn deep_rethreshold_collapses_to_one() {
        let w = [0.3, 0.25, 0.2, 0.15, 0.1];
        let chain = rethreshold_chain(&w, 50, 10).unwrap();
        assert_eq!(chain.last(), 1);
        assert!(chain.estimates().windows(2).all(|p| p[1] <= p[0]));
    }

    #[test]
    fn rerun_uses_level_seeds() {
        let corpus = identical_docs(10);
        let chain = recursive_estimate(&corpus, &quick(4), 2, EstimateMode::Rerun).unwrap();
        assert_eq!(chain.levels.len(), 2);
        assert_eq!(chain.levels[0].threshold_denominator, 10);
        assert_eq!(chain.levels[1].threshold_denominator, chain.hdp1());
        assert_eq!(chain.mode, EstimateMode::Rerun);
    }

    #[test]
    fn significant_topics() {
        let all_one: Assignment = (0..50).map(|i| (format!("D{i}"), 3)).collect();
        assert_eq!(significant_topic_count(&all_one, 0.02).unwrap(), 1);
        let mixed: Assignment = (0..100)
            .map(|i| (format!("D{i}"), if i < 98 { 0 } else { i }))
            .collect();
        assert_eq!(significant_topic_count(&mixed, 0.02).unwrap(), 1);
        assert_eq!(significant_topic_count(&mixed, 0.01).unwrap(), 3);
        assert!(significant_topic_count(&mixed, 1.0).is_err());
    }

    #[test]
    fn reported_significance_ratios() {
        assert!((10.0f64 / 65.0 - 0.154).abs() < 5e-4);
        assert!((14.0f64 / 55.0 - 0.255).abs() < 5e-4);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn weight_vector() -> impl Strategy<Value = Vec<f64>> {
            prop::collection::vec(0.0f64..1.0, 1..40).prop_filter_map("non-zero", |raw| {
                let s: f64 = raw.iter().sum();
                (s > 0.0).then(|| raw.iter().map(|x| x / s).collect())
            })
        }

        proptest! {
            #[test]
            fn rethreshold_chain_invariants(w in weight_vector(), n in 1usize..2000, depth in 1usize..12) {
                let chain = rethreshold_chain(&w, n, depth).unwrap();
                prop_assert_eq!(chain.levels.len(), depth);
                prop_assert_eq!(chain.levels[0].threshold_denominator, n);
                for pair in chain.levels.windows(2) {
                    prop_assert_eq!(pair[1].threshold_denominator, pair[0].estimate.max(1));
                }
                for (i, level) in chain.levels.iter().enumerate() {
                    prop_assert!(level.estimate >= 1);
                    if i > 0 {
                        prop_assert!(level.estimate <= chain.levels[i - 1].estimate);
                    }
                }
            }
        }
    }
}
