//! Benchmarks for evanslab; see `benches/evans.rs`.
