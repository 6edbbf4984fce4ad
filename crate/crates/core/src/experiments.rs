//! Growth curves over corpus prefixes, permutation runs, and comparison of
//! two clusterings of the same documents.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::hdp::{efficiency_ratio, recursive_estimate, EstimateMode, HdpConfig};
use crate::lda::{train_lda, LdaConfig};
use crate::preprocess::BowCorpus;

/// Estimates and topic usage of both estimator levels at one prefix size.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub n_questions: usize,
    pub hdp1_estimate: usize,
    pub hdp1_used: usize,
    pub hdp1_efficiency: f64,
    pub hdp2_estimate: usize,
    pub hdp2_used: usize,
    pub hdp2_efficiency: f64,
}

/// `step, 2·step, …`, ending at `len` even when `len` is not a multiple.
pub fn prefix_sizes(len: usize, step: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = (1..).map(|i| i * step).take_while(|&n| n <= len).collect();
    if sizes.last() != Some(&len) {
        sizes.push(len);
    }
    sizes
}

/// Runs the two-level estimator on every prefix and fits LDA at each
/// level's estimate. LDA at HDP-1 uses `lda.seed`, at HDP-2 `lda.seed + 1`.
pub fn growth_experiment(
    corpus: &BowCorpus,
    step: usize,
    mode: EstimateMode,
    lda: &LdaConfig,
    hdp: &HdpConfig,
) -> Result<Vec<GrowthRow>> {
    if step == 0 {
        return Err(Error::InvalidArgument(
            "growth step must be at least 1".into(),
        ));
    }
    lda.validate()?;
    hdp.validate()?;
    prefix_sizes(corpus.len(), step)
        .into_par_iter()
        .map(|n| growth_row(&corpus.prefix(n)?, mode, lda, hdp))
        .collect()
}

fn growth_row(
    corpus: &BowCorpus,
    mode: EstimateMode,
    lda: &LdaConfig,
    hdp: &HdpConfig,
) -> Result<GrowthRow> {
    let chain = recursive_estimate(corpus, hdp, 2, mode)?;
    let k1 = chain.hdp1();
    let k2 = chain.hdp2().expect("depth 2");
    let m1 = train_lda(corpus, &lda.with_topics(k1))?;
    let m2 = train_lda(
        corpus,
        &lda.with_topics(k2).with_seed(lda.seed.wrapping_add(1)),
    )?;
    Ok(GrowthRow {
        n_questions: corpus.len(),
        hdp1_estimate: k1,
        hdp1_used: m1.used_topic_count(),
        hdp1_efficiency: efficiency_ratio(k1, &m1)?,
        hdp2_estimate: k2,
        hdp2_used: m2.used_topic_count(),
        hdp2_efficiency: efficiency_ratio(k2, &m2)?,
    })
}

/// Growth curves for each seeded permutation of the corpus, in seed order.
pub fn permutation_experiment(
    corpus: &BowCorpus,
    n_perms: usize,
    seeds: &[u64],
    step: usize,
    mode: EstimateMode,
    lda: &LdaConfig,
    hdp: &HdpConfig,
) -> Result<Vec<(u64, Vec<GrowthRow>)>> {
    if seeds.len() != n_perms {
        return Err(Error::InvalidArgument(format!(
            "{n_perms} permutations requested but {} seeds given",
            seeds.len()
        )));
    }
    let mut seen = HashSet::new();
    if let Some(dup) = seeds.iter().find(|s| !seen.insert(**s)) {
        return Err(Error::InvalidArgument(format!(
            "duplicate permutation seed {dup}"
        )));
    }
    seeds
        .par_iter()
        .map(|&seed| {
            Ok((
                seed,
                growth_experiment(&corpus.permute(seed), step, mode, lda, hdp)?,
            ))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchedPair {
    pub topic_a: usize,
    pub topic_b: usize,
    pub size_a: usize,
    pub size_b: usize,
    pub intersection: usize,
    /// |A∩B| / |A∪B|
    pub jaccard: f64,
    /// |A∩B| / |A|
    pub containment: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClusterComparison {
    pub matched_pairs: Vec<MatchedPair>,
    pub unmatched_a: Vec<usize>,
    pub unmatched_b: Vec<usize>,
}

fn check_same_ids(a: &Assignment, b: &Assignment) -> Result<()> {
    let ids_a: BTreeSet<&str> = a.ids().collect();
    let ids_b: BTreeSet<&str> = b.ids().collect();
    if ids_a != ids_b {
        return Err(Error::DocSetMismatch {
            only_a: ids_a.difference(&ids_b).map(|s| s.to_string()).collect(),
            only_b: ids_b.difference(&ids_a).map(|s| s.to_string()).collect(),
        });
    }
    Ok(())
}

fn topic_sizes(a: &Assignment) -> BTreeMap<usize, usize> {
    let mut sizes = BTreeMap::new();
    for (_, t) in a.iter() {
        *sizes.entry(t).or_default() += 1;
    }
    sizes
}

/// Greedily matches each topic of `a` to the unused topic of `b` with the
/// highest Jaccard overlap. Topics of `a` are visited largest first (lower
/// index on ties); Jaccard ties go to the lower `b` index. A topic whose best
/// Jaccard is 0 stays unmatched.
pub fn compare_clusterings(a: &Assignment, b: &Assignment) -> Result<ClusterComparison> {
    check_same_ids(a, b)?;
    let sizes_a = topic_sizes(a);
    let sizes_b = topic_sizes(b);
    let mut overlap: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (id, ta) in a.iter() {
        let tb = b.get(id).expect("same id set");
        *overlap.entry((ta, tb)).or_default() += 1;
    }

    let mut order: Vec<(usize, usize)> = sizes_a.iter().map(|(&t, &s)| (t, s)).collect();
    order.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));

    let mut taken = BTreeSet::new();
    let mut result = ClusterComparison::default();
    for (ta, size_a) in order {
        let mut best: Option<MatchedPair> = None;
        for (&tb, &size_b) in &sizes_b {
            if taken.contains(&tb) {
                continue;
            }
            let inter = overlap.get(&(ta, tb)).copied().unwrap_or(0);
            if inter == 0 {
                continue;
            }
            let jaccard = inter as f64 / (size_a + size_b - inter) as f64;
            if best.as_ref().is_none_or(|p| jaccard > p.jaccard) {
                best = Some(MatchedPair {
                    topic_a: ta,
                    topic_b: tb,
                    size_a,
                    size_b,
                    intersection: inter,
                    jaccard,
                    containment: inter as f64 / size_a as f64,
                });
            }
        }
        match best {
            Some(pair) => {
                taken.insert(pair.topic_b);
                result.matched_pairs.push(pair);
            }
            None => result.unmatched_a.push(ta),
        }
    }
    result.unmatched_b = sizes_b
        .keys()
        .copied()
        .filter(|t| !taken.contains(t))
        .collect();
    Ok(result)
}

/// Where the documents of `source_topic` under `a` land under `b`.
pub fn redistribution(
    source_topic: usize,
    a: &Assignment,
    b: &Assignment,
) -> Result<BTreeMap<usize, usize>> {
    check_same_ids(a, b)?;
    let used = a.used_topics();
    if !used.contains(&source_topic) {
        return Err(Error::TopicOutOfRange {
            topic: source_topic,
            topics: used.last().map_or(0, |t| t + 1),
        });
    }
    let mut counts = BTreeMap::new();
    for id in a.members(source_topic) {
        *counts.entry(b.get(id).expect("same id set")).or_default() += 1;
    }
    Ok(counts)
}
