//! Run configuration: one TOML file, with `--section.key=value` overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tagcluster_core::hdp::{EstimateMode, HdpConfig};
use tagcluster_core::lda::LdaConfig;
use tagcluster_core::{InputFormat, TagMultiplicity};

use crate::error::CliError;

/// Fixed offsets from `master_seed` to each randomized stage.
pub const HDP_SEED_OFFSET: u64 = 1;
pub const LDA_SEED_OFFSET: u64 = 2;
pub const PERMUTATION_SEED_OFFSET: u64 = 100;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    pub corpus: CorpusSection,
    #[serde(default)]
    pub preprocess: PreprocessSection,
    #[serde(default)]
    pub lda: LdaSection,
    #[serde(default)]
    pub hdp: HdpSection,
    #[serde(default)]
    pub estimator: EstimatorSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub compare: CompareSection,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSection {
    pub path: PathBuf,
    #[serde(default = "default_format")]
    pub format: InputFormat,
    #[serde(default = "default_id_prefix")]
    pub id_prefix: String,
}

fn default_format() -> InputFormat {
    InputFormat::PlainText
}

fn default_id_prefix() -> String {
    "Q".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PreprocessSection {
    /// TOML lexicon; the built-in eight-tag lexicon when absent.
    pub tag_lexicon_path: Option<PathBuf>,
    /// Newline-delimited stop words; the bundled English list when absent.
    pub stoplist_path: Option<PathBuf>,
    pub tagging_enabled: bool,
    pub tag_multiplicity: TagMultiplicity,
}

impl Default for PreprocessSection {
    fn default() -> Self {
        Self {
            tag_lexicon_path: None,
            stoplist_path: None,
            tagging_enabled: true,
            tag_multiplicity: TagMultiplicity::Once,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LdaSection {
    /// `None` means `1 / K`.
    pub alpha: Option<f64>,
    pub eta: f64,
    pub iterations: usize,
    pub burn_in: usize,
    /// Keywords written per topic by `cluster`.
    pub keywords: usize,
}

impl Default for LdaSection {
    fn default() -> Self {
        let d = LdaConfig::default();
        Self {
            alpha: d.alpha,
            eta: d.eta,
            iterations: d.iterations,
            burn_in: d.burn_in,
            keywords: 10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HdpSection {
    pub gamma: f64,
    pub alpha0: f64,
    pub beta_word: f64,
    pub k_max: Option<usize>,
    pub iterations: usize,
    pub burn_in: usize,
}

impl Default for HdpSection {
    fn default() -> Self {
        let d = HdpConfig::default();
        Self {
            gamma: d.gamma,
            alpha0: d.alpha0,
            beta_word: d.beta_word,
            k_max: d.k_max,
            iterations: d.iterations,
            burn_in: d.burn_in,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimatorSection {
    pub depth: usize,
    pub mode: EstimateMode,
    pub min_fraction: f64,
}

impl Default for EstimatorSection {
    fn default() -> Self {
        Self {
            depth: 2,
            mode: EstimateMode::Rerun,
            min_fraction: 0.02,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSection {
    pub step: usize,
    pub n_perms: usize,
    /// Permutation seeds; derived from `master_seed` when absent.
    pub seeds: Option<Vec<u64>>,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            step: 100,
            n_perms: 5,
            seeds: None,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareSection {
    /// Assignment files (`id,topic,top_topic_prob`) to compare.
    pub a: Option<PathBuf>,
    pub b: Option<PathBuf>,
    /// Restrict the redistribution table to one topic of `a`.
    pub source_topic: Option<usize>,
}

impl RunConfig {
    /// Reads `path` (if any), applies overrides in order, and resolves
    /// relative paths against the config file's directory.
    pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<Self, CliError> {
        let (mut table, base) = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(p.to_owned(), e))?;
                let table: toml::Table = text
                    .parse()
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                (table, p.parent().map(Path::to_owned).unwrap_or_default())
            }
            None => (toml::Table::new(), PathBuf::new()),
        };
        for (key, value) in overrides {
            apply_override(&mut table, key, value)?;
        }
        let mut config: RunConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        config.resolve_paths(&base);
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.corpus.path);
        fix(&mut self.output_dir);
        for p in [
            &mut self.preprocess.tag_lexicon_path,
            &mut self.preprocess.stoplist_path,
            &mut self.compare.a,
            &mut self.compare.b,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }

    pub fn hdp_config(&self) -> HdpConfig {
        HdpConfig {
            gamma: self.hdp.gamma,
            alpha0: self.hdp.alpha0,
            beta_word: self.hdp.beta_word,
            k_max: self.hdp.k_max,
            iterations: self.hdp.iterations,
            burn_in: self.hdp.burn_in,
            seed: self.master_seed.wrapping_add(HDP_SEED_OFFSET),
        }
    }

    /// LDA template; the topic count is filled in per fit.
    pub fn lda_config(&self) -> LdaConfig {
        LdaConfig {
            topics: 1,
            alpha: self.lda.alpha,
            eta: self.lda.eta,
            iterations: self.lda.iterations,
            burn_in: self.lda.burn_in,
            seed: self.master_seed.wrapping_add(LDA_SEED_OFFSET),
        }
    }

    pub fn permutation_seeds(&self) -> Vec<u64> {
        match &self.experiment.seeds {
            Some(seeds) => seeds.clone(),
            None => (0..self.experiment.n_perms as u64)
                .map(|i| self.master_seed.wrapping_add(PERMUTATION_SEED_OFFSET + i))
                .collect(),
        }
    }
}

/// Sets `section.key` (or a top-level `key`) in `table`. The value is read
/// as a TOML literal when it parses as one, otherwise as a bare string.
pub fn apply_override(table: &mut toml::Table, key: &str, raw: &str) -> Result<(), CliError> {
    let value = parse_value(raw);
    match key.split_once('.') {
        None => {
            table.insert(key.to_owned(), value);
        }
        Some((section, field)) => {
            if section.is_empty() || field.is_empty() || field.contains('.') {
                return Err(CliError::Usage(format!("bad override key {key:?}")));
            }
            let entry = table
                .entry(section.to_owned())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            match entry {
                toml::Value::Table(t) => {
                    t.insert(field.to_owned(), value);
                }
                _ => return Err(CliError::Config(format!("{section} is not a section"))),
            }
        }
    }
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_owned()))
}
