//! Criterion benchmarks for qint-core; see `benches/`.
