use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use tagcluster_core::synthetic::{generate, SyntheticSpec};
use tagcluster_core::{
    rethreshold_chain, train_hdp, train_lda, Corpus, Document, HdpConfig, LdaConfig, Preprocessor,
    Stoplist, TagLexicon,
};

fn corpus() -> tagcluster_core::BowCorpus {
    generate(&SyntheticSpec {
        documents: 200,
        ..Default::default()
    })
    .unwrap()
    .corpus
}

fn lda(c: &mut Criterion) {
    let bow = corpus();
    let config = LdaConfig {
        iterations: 20,
        burn_in: 10,
        ..LdaConfig::new(10)
    };
    c.bench_function("lda_20_sweeps_200_docs", |b| {
        b.iter(|| train_lda(&bow, &config).unwrap())
    });
}

fn hdp(c: &mut Criterion) {
    let bow = corpus();
    let config = HdpConfig {
        iterations: 20,
        burn_in: 10,
        ..Default::default()
    };
    c.bench_function("hdp_20_sweeps_200_docs", |b| {
        b.iter(|| train_hdp(&bow, &config).unwrap())
    });
}

fn preprocess(c: &mut Criterion) {
    let docs = (0..500)
        .map(|i| {
            Document::new(
                format!("Q{i}"),
                format!("What does this print for n = {i}?\nfor k in range(n):\n    if k % 2 == 0:\n        print(k)"),
            )
        })
        .collect();
    let corpus = Corpus::new("bench", docs).unwrap();
    let pre = Preprocessor::tagged(TagLexicon::default_cs(), Stoplist::english());
    c.bench_function("preprocess_500_questions", |b| {
        b.iter(|| pre.process_corpus(&corpus))
    });
}

fn estimator(c: &mut Criterion) {
    let mut weights: Vec<f64> = (1..=150).map(|k| 1.0 / (k as f64).powi(2)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    c.bench_function("rethreshold_depth_10", |b| {
        b.iter_batched(
            || weights.clone(),
            |w| rethreshold_chain(&w, 1300, 10).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = lda, hdp, preprocess, estimator
}
criterion_main!(benches);
