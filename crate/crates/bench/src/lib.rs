//! Shared fixtures for the benchmarks.

use gsio_core::{gen_random, RandomSpec, StructuredSystem};

/// Sizes exercised by every benchmark group.
pub const SIZES: [usize; 3] = [100, 300, 1000];

/// A sparse random system with about five nonzeros per row of `A`.
pub fn sparse_system(n: usize, q: usize, seed: u64) -> StructuredSystem {
    gen_random(&RandomSpec {
        n,
        q,
        density: (5.0 / n as f64).min(1.0),
        dedicated_inputs: true,
        self_loops: false,
        seed,
    })
    .expect("valid generator parameters")
}

/// The same system with a two-stage placement applied, so checks run on a
/// GSIO instance.
pub fn placed_system(n: usize, q: usize, seed: u64) -> StructuredSystem {
    let sys = sparse_system(n, q, seed);
    gsio_core::two_stage(&sys)
        .and_then(|p| p.apply(&sys))
        .expect("two-stage placement always applies")
}
