//! Criterion benchmarks for moodkit live in `benches/`.
