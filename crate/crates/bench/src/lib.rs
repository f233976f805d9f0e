//! Criterion benchmarks for the counting library; see `benches/counting.rs`.
