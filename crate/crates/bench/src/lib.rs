//! Criterion benchmarks for `qwfin`; see `benches/`.
