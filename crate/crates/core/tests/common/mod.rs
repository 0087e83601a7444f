#![allow(dead_code)]

use rand::Rng;
use specdiff::DoubleDouble;

/// Finite-difference weights by expanding each Lagrange basis polynomial in
/// powers of `x`, differentiating the coefficients `m` times and evaluating
/// at `zeta` with Horner's rule, all in double-double.
pub fn oracle_weights(nodes: &[f64], m: usize, zeta: f64) -> Vec<DoubleDouble> {
    let z = DoubleDouble::new(zeta);
    (0..nodes.len())
        .map(|k| {
            let mut poly = vec![DoubleDouble::ONE];
            let mut denom = DoubleDouble::ONE;
            for (j, &xj) in nodes.iter().enumerate() {
                if j == k {
                    continue;
                }
                let mut next = vec![DoubleDouble::ZERO; poly.len() + 1];
                for (p, &c) in poly.iter().enumerate() {
                    next[p + 1] += c;
                    next[p] -= c * DoubleDouble::new(xj);
                }
                poly = next;
                denom *= DoubleDouble::from_diff(nodes[k], xj);
            }
            for _ in 0..m {
                poly = poly
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(p, &c)| c * DoubleDouble::new(p as f64))
                    .collect();
            }
            let v = poly
                .iter()
                .rev()
                .fold(DoubleDouble::ZERO, |acc, &c| acc * z + c);
            v / denom
        })
        .collect()
}

/// Sorted distinct nodes in `[-1, 1]` with spacing at least `gap`.
pub fn random_grid<R: Rng>(rng: &mut R, len: usize, gap: f64) -> Vec<f64> {
    loop {
        let mut x: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
        x.sort_by(|a, b| b.total_cmp(a));
        if x.windows(2).all(|p| p[0] - p[1] >= gap) {
            return x;
        }
    }
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}
