//! Shared input generators for the criterion benches.

use ivdev_core::{IvDeviation, ModDevSpec, OrderParams, UnitInterval, WdMeanConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` random intervals of one common random width.
pub fn equal_width_tuple(n: usize, seed: u64) -> Vec<UnitInterval> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = rng.random_range(0.0..0.5);
    (0..n)
        .map(|_| {
            let lo = rng.random_range(0.0..=1.0 - w);
            UnitInterval::new(lo, lo + w).expect("inside [0, 1]")
        })
        .collect()
}

/// Random probability rows, each summing to one.
pub fn probability_rows(rows: usize, classes: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows)
        .map(|_| {
            let raw: Vec<f64> = (0..classes).map(|_| rng.random_range(0.01..1.0)).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / total).collect()
        })
        .collect()
}

pub fn case_config(case: usize) -> WdMeanConfig {
    WdMeanConfig::new(IvDeviation::new(
        ModDevSpec::case(case, 10.0, 10.0).expect("valid case"),
        OrderParams::default(),
    ))
}
