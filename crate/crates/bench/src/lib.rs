//! Criterion benchmarks for the `yiopt` crate; see `benches/`.
