//! Shared fixtures for the criterion benches.

use chainscope_core::{builtin_system, BuiltinParams, EvaluableSystem, GapMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn akin_grid(n: usize) -> EvaluableSystem {
    builtin_system(
        "akin",
        &BuiltinParams {
            grid_n: Some(n),
            ..Default::default()
        },
    )
    .expect("builtin system")
}

pub fn sigma1(k: usize) -> EvaluableSystem {
    builtin_system(
        "sigma1",
        &BuiltinParams {
            truncation_k: Some(k),
            ..Default::default()
        },
    )
    .expect("builtin system")
}

pub fn random_gap(seed: u64, n: usize) -> GapMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gap: Vec<f64> = (0..n * n)
        .map(|_| {
            if rng.gen_bool(0.05) {
                0.0
            } else {
                rng.gen_range(0.0..1.0)
            }
        })
        .collect();
    GapMatrix::from_raw(n, gap)
}
