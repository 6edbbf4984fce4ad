//! One function per subcommand. Each rebuilds what it needs from the corpus
//! so a run depends only on the config.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ValueEnum;
use serde_json::json;
use tagcluster_core::hdp::EstimateChain;
use tagcluster_core::{
    compare_clusterings, growth_experiment, load_corpus, permutation_experiment,
    recursive_estimate, redistribution, significant_topic_count, train_lda, write_table, BowCorpus,
    Corpus, GrowthRow, Preprocessor, Stoplist, TagLexicon,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{digests, write_csv, RunManifest, StageTiming};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    Ingest,
    Preprocess,
    Estimate,
    Cluster,
    Growth,
    Permute,
    Compare,
}

impl Subcommand {
    fn name(self) -> &'static str {
        match self {
            Subcommand::Ingest => "ingest",
            Subcommand::Preprocess => "preprocess",
            Subcommand::Estimate => "estimate",
            Subcommand::Cluster => "cluster",
            Subcommand::Growth => "growth",
            Subcommand::Permute => "permute",
            Subcommand::Compare => "compare",
        }
    }
}

pub const GROWTH_HEADER: [&str; 7] = [
    "n_questions",
    "hdp1_estimate",
    "hdp1_used",
    "hdp1_efficiency",
    "hdp2_estimate",
    "hdp2_used",
    "hdp2_efficiency",
];

struct Recorder {
    dir: PathBuf,
    stages: Vec<StageTiming>,
    outputs: Vec<PathBuf>,
    summary: serde_json::Map<String, serde_json::Value>,
}

impl Recorder {
    fn timed<T>(
        &mut self,
        stage: &str,
        f: impl FnOnce() -> Result<T, CliError>,
    ) -> Result<T, CliError> {
        let start = Instant::now();
        let out = f()?;
        self.stages.push(StageTiming {
            stage: stage.to_owned(),
            seconds: start.elapsed().as_secs_f64(),
        });
        Ok(out)
    }

    fn file(&mut self, name: &str) -> PathBuf {
        let path = self.dir.join(name);
        self.outputs.push(path.clone());
        path
    }
}

/// Runs `command` and writes its outputs plus `<command>.manifest.json`.
/// Returns the data files written.
pub fn run(command: Subcommand, config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let dir = config.output_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| CliError::Io(dir.clone(), e))?;
    let mut rec = Recorder {
        dir,
        stages: Vec::new(),
        outputs: Vec::new(),
        summary: serde_json::Map::new(),
    };
    match command {
        Subcommand::Ingest => ingest(config, &mut rec)?,
        Subcommand::Preprocess => preprocess(config, &mut rec)?,
        Subcommand::Estimate => {
            let bow = bow_corpus(config, &mut rec)?;
            estimate(config, &bow, &mut rec)?;
        }
        Subcommand::Cluster => cluster(config, &mut rec)?,
        Subcommand::Growth => growth(config, &mut rec)?,
        Subcommand::Permute => permute(config, &mut rec)?,
        Subcommand::Compare => compare(config, &mut rec)?,
    }
    let manifest = RunManifest {
        subcommand: command.name().to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        config,
        stages: rec.stages,
        outputs: digests(&rec.dir, &rec.outputs)?,
        summary: rec.summary,
    };
    let path = rec.dir.join(format!("{}.manifest.json", command.name()));
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text + "\n").map_err(|e| CliError::Io(path, e))?;
    Ok(rec.outputs)
}

fn load(config: &RunConfig, rec: &mut Recorder) -> Result<Corpus, CliError> {
    rec.timed("load", || {
        Ok(load_corpus(
            &config.corpus.path,
            config.corpus.format,
            &config.corpus.id_prefix,
        )?)
    })
}

pub fn preprocessor(config: &RunConfig) -> Result<Preprocessor, CliError> {
    let p = &config.preprocess;
    let stoplist = match &p.stoplist_path {
        Some(path) => Stoplist::from_file(path)?,
        None => Stoplist::english(),
    };
    if !p.tagging_enabled {
        return Ok(Preprocessor::untagged(stoplist));
    }
    let lexicon = match &p.tag_lexicon_path {
        Some(path) => TagLexicon::from_file(path)?,
        None => TagLexicon::default_cs(),
    };
    Ok(Preprocessor::tagged(lexicon, stoplist).with_multiplicity(p.tag_multiplicity))
}

fn processed(config: &RunConfig, rec: &mut Recorder) -> Result<Corpus, CliError> {
    let corpus = load(config, rec)?;
    let pre = preprocessor(config)?;
    rec.timed("preprocess", || Ok(pre.process_corpus(&corpus)))
}

fn bow_corpus(config: &RunConfig, rec: &mut Recorder) -> Result<BowCorpus, CliError> {
    let corpus = processed(config, rec)?;
    let bow = BowCorpus::from_corpus(&corpus)?;
    rec.summary.insert("documents".into(), json!(bow.len()));
    rec.summary
        .insert("vocabulary".into(), json!(bow.vocabulary().len()));
    rec.summary
        .insert("tokens".into(), json!(bow.total_tokens()));
    Ok(bow)
}

fn seed_comment(config: &RunConfig) -> String {
    format!(
        "seed={} hdp_seed={} lda_seed={}",
        config.master_seed,
        config.hdp_config().seed,
        config.lda_config().seed
    )
}

fn ingest(config: &RunConfig, rec: &mut Recorder) -> Result<(), CliError> {
    let corpus = load(config, rec)?;
    let path = rec.file("corpus.csv");
    let file = fs::File::create(&path).map_err(|e| CliError::Io(path.clone(), e))?;
    write_table(&corpus, file).map_err(|e| CliError::Csv(path, e))?;
    rec.summary.insert("documents".into(), json!(corpus.len()));
    Ok(())
}

fn preprocess(config: &RunConfig, rec: &mut Recorder) -> Result<(), CliError> {
    let corpus = processed(config, rec)?;
    let rows = corpus.documents().iter().map(|d| {
        let tags: Vec<&str> = d.applied_tags.iter().map(String::as_str).collect();
        [d.id.clone(), d.tokens.join(" "), tags.join(";")]
    });
    let path = rec.file("tokens.csv");
    write_csv(&path, &[], &["id", "tokens", "tags"], rows)?;
    let bow = BowCorpus::from_corpus(&corpus)?;
    let path = rec.file("vocab.csv");
    let rows = bow
        .vocabulary()
        .iter()
        .enumerate()
        .map(|(i, t)| [i.to_string(), t.to_owned()]);
    write_csv(&path, &[], &["index", "term"], rows)?;
    rec.summary.insert("documents".into(), json!(bow.len()));
    rec.summary
        .insert("vocabulary".into(), json!(bow.vocabulary().len()));
    Ok(())
}

fn estimate(
    config: &RunConfig,
    bow: &BowCorpus,
    rec: &mut Recorder,
) -> Result<EstimateChain, CliError> {
    let hdp = config.hdp_config();
    let est = &config.estimator;
    let chain = rec.timed("hdp", || {
        Ok(recursive_estimate(bow, &hdp, est.depth, est.mode)?)
    })?;
    let rows = chain.levels.iter().enumerate().map(|(i, level)| {
        [
            (i + 1).to_string(),
            level.threshold().to_string(),
            level.estimate.to_string(),
            chain.mode.to_string(),
        ]
    });
    let path = rec.file("chain.csv");
    write_csv(
        &path,
        &[
            seed_comment(config),
            format!("corpus_size={}", chain.corpus_size),
        ],
        &["level", "threshold", "estimate", "mode"],
        rows,
    )?;
    rec.summary
        .insert("estimates".into(), json!(chain.estimates()));
    Ok(chain)
}

fn cluster(config: &RunConfig, rec: &mut Recorder) -> Result<(), CliError> {
    let bow = bow_corpus(config, rec)?;
    let chain = estimate(config, &bow, rec)?;
    let k = chain.last();
    let lda = config.lda_config().with_topics(k);
    let model = rec.timed("lda", || Ok(train_lda(&bow, &lda)?))?;
    for w in model.warnings() {
        log::warn!("{w}");
    }
    let assignment = model.doc_topic_assignment();
    let significant = significant_topic_count(&assignment, config.estimator.min_fraction)?;
    let comments = [seed_comment(config), format!("topics={k}")];

    let rows = (0..bow.len()).map(|d| {
        let id = &bow.doc_ids()[d];
        [
            id.clone(),
            assignment
                .get(id)
                .expect("every document assigned")
                .to_string(),
            model.top_topic_prob(d).to_string(),
        ]
    });
    let path = rec.file("assignments.csv");
    write_csv(&path, &comments, &["id", "topic", "top_topic_prob"], rows)?;

    let mut rows = Vec::new();
    for topic in 0..k {
        for (rank, kw) in model
            .top_keywords(topic, config.lda.keywords)?
            .into_iter()
            .enumerate()
        {
            rows.push([
                topic.to_string(),
                (rank + 1).to_string(),
                kw.term,
                kw.probability.to_string(),
            ]);
        }
    }
    let path = rec.file("keywords.csv");
    write_csv(
        &path,
        &comments,
        &["topic", "rank", "term", "probability"],
        rows,
    )?;

    let vocab = bow.vocabulary();
    let rows = (0..k).flat_map(|topic| {
        model.phi(topic).iter().enumerate().map(move |(w, p)| {
            [
                topic.to_string(),
                vocab.term(w).expect("in range").to_owned(),
                p.to_string(),
            ]
        })
    });
    let path = rec.file("phi.csv");
    write_csv(&path, &comments, &["topic", "term", "probability"], rows)?;

    let model = &model;
    let rows = bow.doc_ids().iter().enumerate().flat_map(|(d, id)| {
        model
            .theta(d)
            .iter()
            .enumerate()
            .map(move |(t, p)| [id.clone(), t.to_string(), p.to_string()])
    });
    let path = rec.file("theta.csv");
    write_csv(&path, &comments, &["id", "topic", "probability"], rows)?;

    rec.summary.insert("topics".into(), json!(k));
    rec.summary
        .insert("used_topics".into(), json!(model.used_topic_count()));
    rec.summary
        .insert("significant_topics".into(), json!(significant));
    Ok(())
}

fn growth_rows(rows: &[GrowthRow]) -> impl Iterator<Item = [String; 7]> + '_ {
    rows.iter().map(|r| {
        [
            r.n_questions.to_string(),
            r.hdp1_estimate.to_string(),
            r.hdp1_used.to_string(),
            r.hdp1_efficiency.to_string(),
            r.hdp2_estimate.to_string(),
            r.hdp2_used.to_string(),
            r.hdp2_efficiency.to_string(),
        ]
    })
}

fn growth(config: &RunConfig, rec: &mut Recorder) -> Result<(), CliError> {
    let bow = bow_corpus(config, rec)?;
    let (lda, hdp) = (config.lda_config(), config.hdp_config());
    let rows = rec.timed("growth", || {
        Ok(growth_experiment(
            &bow,
            config.experiment.step,
            config.estimator.mode,
            &lda,
            &hdp,
        )?)
    })?;
    let path = rec.file("growth.csv");
    write_csv(
        &path,
        &[seed_comment(config)],
        &GROWTH_HEADER,
        growth_rows(&rows),
    )?;
    Ok(())
}

fn permute(config: &RunConfig, rec: &mut Recorder) -> Result<(), CliError> {
    let bow = bow_corpus(config, rec)?;
    let (lda, hdp) = (config.lda_config(), config.hdp_config());
    let seeds = config.permutation_seeds();
    let exp = &config.experiment;
    let runs = rec.timed("permute", || {
        Ok(permutation_experiment(
            &bow,
            exp.n_perms,
            &seeds,
            exp.step,
            config.estimator.mode,
            &lda,
            &hdp,
        )?)
    })?;
    for (seed, rows) in &runs {
        let path = rec.file(&format!("growth_seed{seed}.csv"));
        let comments = [seed_comment(config), format!("permutation_seed={seed}")];
        write_csv(&path, &comments, &GROWTH_HEADER, growth_rows(rows))?;
    }
    rec.summary.insert("permutation_seeds".into(), json!(seeds));
    Ok(())
}

fn required<'a>(path: &'a Option<PathBuf>, key: &str) -> Result<&'a Path, CliError> {
    path.as_deref()
        .ok_or_else(|| CliError::Config(format!("`compare.{key}` is required for compare")))
}

fn compare(config: &RunConfig, rec: &mut Recorder) -> Result<(), CliError> {
    let a = crate::output::read_assignment(required(&config.compare.a, "a")?)?;
    let b = crate::output::read_assignment(required(&config.compare.b, "b")?)?;
    let cmp = rec.timed("compare", || Ok(compare_clusterings(&a, &b)?))?;
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(";");
    let comments = [
        format!("unmatched_a={}", join(&cmp.unmatched_a)),
        format!("unmatched_b={}", join(&cmp.unmatched_b)),
    ];
    let rows = cmp.matched_pairs.iter().map(|p| {
        [
            p.topic_a.to_string(),
            p.topic_b.to_string(),
            p.size_a.to_string(),
            p.size_b.to_string(),
            p.intersection.to_string(),
            p.jaccard.to_string(),
            p.containment.to_string(),
        ]
    });
    let path = rec.file("compare.csv");
    write_csv(
        &path,
        &comments,
        &[
            "topic_a",
            "topic_b",
            "size_a",
            "size_b",
            "intersection",
            "jaccard",
            "containment",
        ],
        rows,
    )?;

    let sources: Vec<usize> = match config.compare.source_topic {
        Some(t) => vec![t],
        None => a.used_topics().into_iter().collect(),
    };
    let mut rows = Vec::new();
    for source in sources {
        for (dest, count) in redistribution(source, &a, &b)? {
            rows.push([source.to_string(), dest.to_string(), count.to_string()]);
        }
    }
    let path = rec.file("redistribution.csv");
    write_csv(&path, &[], &["source_topic", "dest_topic", "count"], rows)?;
    rec.summary
        .insert("matched_pairs".into(), json!(cmp.matched_pairs.len()));
    Ok(())
}
