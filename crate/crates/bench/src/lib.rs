//! Criterion benchmarks for `walg-core`; see `benches/`.
