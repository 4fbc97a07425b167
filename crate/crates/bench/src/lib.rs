//! Criterion benchmarks for `ecsense-core`; see `benches/`.
