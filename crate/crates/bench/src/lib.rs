//! Criterion benchmarks for the samplers, preprocessing and the estimator; see `benches/`.
