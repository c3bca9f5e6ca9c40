//! Benchmarks for `orbitdepth` live under `benches/`; run them with `cargo bench -p orbitdepth-bench`.
