//! Benchmark-only crate; see `benches/solver.rs`.

/// Re-export so the bench target has a stable path to the library.
pub use sie_core;
