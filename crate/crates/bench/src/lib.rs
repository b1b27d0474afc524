//! Benchmark-only crate; see `benches/kernels.rs` for the criterion suite
//! covering the numeric hot paths (phase minimization, joint maximum-
//! likelihood decoding, region evaluation, and bin decoding).
