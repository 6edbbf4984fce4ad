//! Topic clustering of subject-specific question banks.
//!
//! The pipeline: [`corpus`] loads question records, [`preprocess`] tokenizes
//! them, injects domain tags (`tag_for`, `tag_modulo`, …) and removes stop
//! words, [`hdp`] estimates how many topics the bank holds, and [`lda`]
//! clusters the questions at that topic count. [`experiments`] runs the
//! growth-curve and tagged-versus-untagged comparisons.

pub mod assignment;
pub mod corpus;
pub mod error;
pub mod experiments;
pub mod hdp;
pub mod lda;
pub mod preprocess;
pub mod rng;
pub mod synthetic;

pub use assignment::Assignment;
pub use corpus::{load_corpus, write_table, Corpus, Document, InputFormat};
pub use error::{Error, Result};
pub use experiments::{
    compare_clusterings, growth_experiment, permutation_experiment, redistribution,
    ClusterComparison, GrowthRow, MatchedPair,
};
pub use hdp::{
    efficiency_ratio, estimate_topic_count, recursive_estimate, rethreshold_chain,
    significant_topic_count, train_hdp, EstimateChain, EstimateLevel, EstimateMode, HdpConfig,
    HdpPosterior,
};
pub use lda::{gibbs_conditional, train_lda, Keyword, LdaConfig, LdaModel, TopicCounts};
pub use preprocess::{BowCorpus, Preprocessor, Stoplist, TagLexicon, TagMultiplicity, Vocabulary};
