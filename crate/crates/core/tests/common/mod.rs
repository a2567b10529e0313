#![allow(dead_code)]

use evpos::linalg::DenseMatrix;
use proptest::prelude::*;
use proptest::test_runner::{Config as PtConfig, RngSeed};

/// Fixed-seed runner so every run draws the same cases.
pub fn runner(cases: u32) -> PtConfig {
    PtConfig { cases, rng_seed: RngSeed::Fixed(0x5eed_0f_e5b0), failure_persistence: None, ..PtConfig::default() }
}

pub fn real_matrix(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(lo..hi, n * n).prop_map(move |v| DenseMatrix::from_real_row_major(n, &v).unwrap())
}

pub fn any_dim_matrix(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = DenseMatrix> {
    dims.prop_flat_map(|n| real_matrix(n, -1.0, 1.0))
}

/// `‖x − y‖ / max(‖y‖, 1e−300)`.
pub fn rel_err(x: &DenseMatrix, y: &DenseMatrix) -> f64 {
    (x - y).operator_norm() / y.operator_norm().max(1e-300)
}

pub fn counterexample() -> (DenseMatrix, DenseMatrix) {
    evpos::models::counterexample_3d()
}
