//! Criterion benchmarks for the greedy engines; see `benches/`.
