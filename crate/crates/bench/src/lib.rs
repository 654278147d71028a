//! Criterion benchmarks for `dgetc-core`; see `benches/`.
