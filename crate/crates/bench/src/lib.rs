//! Criterion benchmarks for the `ta-core` engines; see `benches/`.
