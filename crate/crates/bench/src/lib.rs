//! Criterion benchmarks for `coinrt`. Run with `cargo bench -p coinrt-bench`.
