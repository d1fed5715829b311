//! Benchmark-only crate; see `benches/fusion_benches.rs`.
