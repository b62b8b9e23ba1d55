//! Benchmarks for the exact engines; see `benches/engine.rs`.
