//! Criterion benchmarks for pio-core. See `benches/`.
