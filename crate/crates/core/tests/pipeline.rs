use std::collections::BTreeMap;
use std::io::Write;

use proptest::prelude::*;
use tagcluster_core::synthetic::{generate, SyntheticSpec};
use tagcluster_core::{
    compare_clusterings, load_corpus, recursive_estimate, redistribution, rethreshold_chain,
    significant_topic_count, train_hdp, train_lda, Assignment, BowCorpus, EstimateMode, HdpConfig,
    InputFormat, LdaConfig, Preprocessor, Stoplist, TagLexicon,
};

fn questions() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    let mut blocks = Vec::new();
    for i in 0..12 {
        blocks.push(format!("What is {} % {} when hashing keys?", 20 + i, 7));
        blocks.push(format!(
            "Trace this loop:\nfor i in range({i}):\n    print(i)"
        ));
        blocks.push(format!(
            "Why is binary search O(log n) on {i} sorted items?"
        ));
    }
    write!(f, "{}", blocks.join("\n\n")).unwrap();
    f
}

fn fast_lda(k: usize) -> LdaConfig {
    LdaConfig {
        iterations: 200,
        burn_in: 100,
        seed: 4,
        ..LdaConfig::new(k)
    }
}

#[test]
fn text_to_clusters() {
    let f = questions();
    let corpus = load_corpus(f.path(), InputFormat::PlainText, "Q").unwrap();
    assert_eq!(corpus.len(), 36);
    let pre = Preprocessor::tagged(TagLexicon::default_cs(), Stoplist::english());
    let bow = BowCorpus::from_corpus(&pre.process_corpus(&corpus)).unwrap();
    assert!(bow.vocabulary().index("tag_modulo").is_some());
    assert!(bow.vocabulary().index("tag_for").is_some());
    assert!(bow.vocabulary().index("tag_bigo").is_some());

    let model = train_lda(&bow, &fast_lda(3)).unwrap();
    let assignment = model.doc_topic_assignment();
    assert_eq!(assignment.len(), 36);
    // Each question family shares a dominant topic.
    for family in 0..3 {
        let topics: Vec<usize> = (0..12)
            .map(|i| assignment.get(&format!("Q{}", 3 * i + family + 1)).unwrap())
            .collect();
        assert!(
            topics.iter().all(|&t| t == topics[0]),
            "family {family}: {topics:?}"
        );
    }
    assert_eq!(significant_topic_count(&assignment, 0.02).unwrap(), 3);
    let keywords: Vec<String> = (0..3)
        .flat_map(|t| model.top_keywords(t, 5).unwrap())
        .map(|k| k.term)
        .collect();
    assert!(keywords.iter().any(|k| k == "tag_modulo"));
}

#[test]
fn untagged_pipeline_loses_code_keywords() {
    let f = questions();
    let corpus = load_corpus(f.path(), InputFormat::PlainText, "Q").unwrap();
    let bow = BowCorpus::from_corpus(
        &Preprocessor::untagged(Stoplist::english()).process_corpus(&corpus),
    )
    .unwrap();
    assert!(bow.vocabulary().index("for").is_none());
    assert!(bow.vocabulary().iter().all(|t| !t.starts_with("tag_")));
}

#[test]
fn hdp_recovers_planted_topic_count() {
    let syn = generate(&SyntheticSpec {
        documents: 300,
        seed: 11,
        ..Default::default()
    })
    .unwrap();
    let config = HdpConfig {
        iterations: 300,
        burn_in: 150,
        seed: 2,
        ..Default::default()
    };
    let posterior = train_hdp(&syn.corpus, &config).unwrap();
    let sum: f64 = posterior.weights().iter().sum();
    assert!((sum - 1.0).abs() < 1e-9);
    let chain = recursive_estimate(&syn.corpus, &config, 2, EstimateMode::Rethreshold).unwrap();
    assert!((5..=8).contains(&chain.hdp1()), "{chain:?}");
    assert!(chain.hdp2().unwrap() <= chain.hdp1());
}

#[test]
fn compare_two_fits_of_the_same_corpus() {
    let f = questions();
    let corpus = load_corpus(f.path(), InputFormat::PlainText, "Q").unwrap();
    let pre = Preprocessor::tagged(TagLexicon::default_cs(), Stoplist::english());
    let bow = BowCorpus::from_corpus(&pre.process_corpus(&corpus)).unwrap();
    let a = train_lda(&bow, &fast_lda(3))
        .unwrap()
        .doc_topic_assignment();
    let b = train_lda(&bow, &fast_lda(6).with_seed(9))
        .unwrap()
        .doc_topic_assignment();
    let cmp = compare_clusterings(&a, &b).unwrap();
    for p in &cmp.matched_pairs {
        let moved = redistribution(p.topic_a, &a, &b).unwrap();
        assert_eq!(moved.values().sum::<usize>(), p.size_a);
        assert_eq!(moved[&p.topic_b], p.intersection);
    }
}

fn arb_assignment(n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..8, n)
}

proptest! {
    #[test]
    fn comparison_bounds(pair in (1usize..120).prop_flat_map(|n| (arb_assignment(n), arb_assignment(n)))) {
        let a: Assignment = pair.0.iter().enumerate().map(|(i, &t)| (format!("D{i}"), t)).collect();
        let b: Assignment = pair.1.iter().enumerate().map(|(i, &t)| (format!("D{i}"), t)).collect();
        let cmp = compare_clusterings(&a, &b).unwrap();
        let matched: usize = cmp.matched_pairs.iter().map(|p| p.intersection).sum();
        prop_assert!(matched <= a.len());
        prop_assert_eq!(cmp.matched_pairs.len() + cmp.unmatched_a.len(), a.used_topics().len());
        prop_assert_eq!(cmp.matched_pairs.len() + cmp.unmatched_b.len(), b.used_topics().len());
        for p in &cmp.matched_pairs {
            prop_assert!(p.jaccard > 0.0 && p.jaccard <= p.containment && p.containment <= 1.0);
        }
        let mut total = BTreeMap::new();
        for t in a.used_topics() {
            for (dest, c) in redistribution(t, &a, &b).unwrap() {
                *total.entry(dest).or_insert(0) += c;
            }
        }
        prop_assert_eq!(total.values().sum::<usize>(), a.len());
    }

    #[test]
    fn rethreshold_never_grows(raw in proptest::collection::vec(0.0f64..1.0, 1..60), n in 1usize..500, depth in 1usize..12) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 0.0);
        let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        weights.sort_by(|x, y| y.total_cmp(x));
        let chain = rethreshold_chain(&weights, n, depth).unwrap();
        let est = chain.estimates();
        prop_assert_eq!(est.len(), depth);
        prop_assert!(est.iter().all(|&e| e >= 1 && e <= weights.len().max(1)));
        prop_assert!(est.windows(2).all(|w| w[1] <= w[0]));
    }
}
