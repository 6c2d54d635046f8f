//! Criterion benchmarks for the group engine; see `benches/engine.rs`.
