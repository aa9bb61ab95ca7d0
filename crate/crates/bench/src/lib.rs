//! Criterion benchmarks for the sampling and certification kernels; see `benches/`.
