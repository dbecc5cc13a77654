//! Seeded fixtures shared by the benchmarks.

use std::sync::Arc;

use strata_core::random::{random_diagram, rng_from_seed, GenConfig};
use strata_core::{FinPoset, Matrix, MonotoneMap, Q, StratDiagram};

/// Dense integer matrix with entries in `-3..=3`, fixed by `seed`.
pub fn matrix(rows: usize, cols: usize, seed: u64) -> Matrix<Q> {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let entries: Vec<i64> = (0..rows * cols)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 7) as i64 - 3
        })
        .collect();
    Matrix::from_i64(rows, cols, &entries)
}

/// Random diagram on a chain with `n` elements, stratified by itself.
pub fn chain_diagram(n: usize, seed: u64) -> StratDiagram<Q> {
    let strat = MonotoneMap::identity(Arc::new(FinPoset::chain(n)));
    random_diagram(&mut rng_from_seed(seed), &strat, &GenConfig::small())
}
