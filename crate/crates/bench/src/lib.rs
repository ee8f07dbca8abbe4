//! Benchmarks for the deciders live in `benches/`.
