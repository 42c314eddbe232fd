//! Criterion benchmarks for `firerisk-core` live in `benches/`.
