//! Shared inputs for the differentiation benchmarks.

use specdiff::{ChebGrid, TestFunction};

/// Chebyshev grid of size `n` with `sin(2 pi x)` sampled on it.
pub fn sine_fixture(n: usize) -> (ChebGrid, Vec<f64>) {
    let grid = ChebGrid::new(n).expect("n >= 2");
    let samples = TestFunction::sin_fixed().samples(grid.nodes());
    (grid, samples)
}
