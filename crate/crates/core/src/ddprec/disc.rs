//! Discretization error of the edge derivative on Chebyshev points.
//!
//! For the `m`-th derivative at `zeta = x_0 = 1`, the error
//! `f^(m)(1) - p^(m)(1)` of the interpolant derivative is
//!
//! ```text
//! U_D = sum_{j=0}^{m-1} m! D_{j+2} S_{n+1-m+j}(1 - x_1, ..., 1 - x_n)
//! ```
//!
//! with `D_{j+2} = f[1^(j+2), x_1, ..., x_n]` (`1` repeated `j + 2` times).

use crate::chebgrid::ChebGrid;
use crate::ddprec::{divdiff, DoubleDouble, TestFunction, DD_EPSILON};
use crate::error::{Error, Result};
use crate::symfun::elem_sym;

/// Discretization-error model at the right endpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscError {
    /// `U_D` rounded to working precision.
    pub value: f64,
    /// `D_2, ..., D_{m+1}`.
    pub divided: Vec<f64>,
    /// False when the divided differences are not resolved by double-double
    /// arithmetic or the result underflows.
    pub reliable: bool,
}

/// `1 - x_j` for `j = 1..=n`, from `1 - cos t = 2 sin^2(t / 2)`.
fn edge_gaps(grid: &ChebGrid) -> Vec<f64> {
    let n = grid.n();
    (1..=n)
        .map(|j| {
            let s = (std::f64::consts::PI * j as f64 / (2 * n) as f64).sin();
            2.0 * s * s
        })
        .collect()
}

/// Evaluates `U_D` for the `m`-th derivative at `x_0 = 1`.
pub fn disc_error(f: &TestFunction, grid: &ChebGrid, m: usize) -> Result<DiscError> {
    if !(1..=4).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "discretization model needs m in 1..=4, got {m}"
        )));
    }
    let n = grid.n();
    if m > n {
        return Err(Error::OrderExceedsDegree {
            order: m,
            degree: n,
        });
    }
    let mut nodes = vec![(1.0, m + 1)];
    nodes.extend(grid.nodes()[1..].iter().map(|&x| (x, 1)));
    let table = divdiff(f, &nodes)?;
    let last = table.len() - 1;
    // D_{j+2} spans the last j + 2 copies of 1
    let d: Vec<DoubleDouble> = (0..m).map(|j| table.entry(m - 1 - j, last)).collect();

    let sym = elem_sym(&edge_gaps(grid))?;
    let factorial = DoubleDouble::new((1..=m).map(|i| i as f64).product());
    let mut total = DoubleDouble::ZERO;
    for (j, dj) in d.iter().enumerate() {
        total += factorial * *dj * DoubleDouble::new(sym.get(n + 1 - m + j));
    }

    let scale = f
        .samples(grid.nodes())
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    // rounding in an order-(n+1) difference table on [-1, 1] grows like 2^n
    let noise = DD_EPSILON * scale * 2f64.powi((n + m) as i32);
    let value = total.to_f64();
    let reliable = d[0].abs().to_f64() > 100.0 * noise
        && value.is_finite()
        && (value == 0.0 || value.abs() >= f64::MIN_POSITIVE);
    Ok(DiscError {
        value,
        divided: d.iter().map(|v| v.to_f64()).collect(),
        reliable,
    })
}

/// Large-`n` form of `U_D` in terms of `D_2, ..., D_{m+1}`.
pub fn disc_error_asym(m: usize, n: usize, d: &[f64]) -> Result<f64> {
    if !(1..=4).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "asymptotic discretization model needs m in 1..=4, got {m}"
        )));
    }
    if d.len() < m {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: d.len(),
        });
    }
    let nf = n as f64;
    let two_n = 2f64.powi(n as i32);
    let lead = d[0] / (nf * two_n);
    let tail = |j: usize| d[j] / two_n;
    Ok(match m {
        1 => 4.0 * lead * nf.powi(2),
        2 => 8.0 / 3.0 * lead * nf.powi(4) + 8.0 * nf * tail(1),
        3 => 0.8 * lead * nf.powi(6) + 8.0 * nf.powi(3) * tail(1) + 24.0 * nf * tail(2),
        _ => {
            16.0 / 105.0 * lead * nf.powi(8)
                + 3.2 * nf.powi(5) * tail(1)
                + 32.0 * nf.powi(3) * tail(2)
                + 96.0 * nf * tail(3)
        }
    })
}

/// Order-of-magnitude estimate `f[x_1..x_n, zeta] n / 2^n` of the error at
/// `zeta` of the interpolant through `x_1..x_n`, with `zeta` midway between
/// `x_1` and `x_0`. The node polynomial there is `4 n / 2^n` times a factor
/// of order one.
pub fn interp_error_est(f: &TestFunction, grid: &ChebGrid) -> Result<f64> {
    let x = grid.nodes();
    interp_error_est_at(f, grid, 0.5 * (x[0] + x[1]))
}

pub fn interp_error_est_at(f: &TestFunction, grid: &ChebGrid, zeta: f64) -> Result<f64> {
    let n = grid.n();
    let x = grid.nodes();
    if x[1..].contains(&zeta) {
        return Err(Error::InvalidArgument(format!(
            "evaluation point {zeta} coincides with a node"
        )));
    }
    let mut nodes: Vec<(f64, usize)> = x[1..].iter().map(|&v| (v, 1)).collect();
    nodes.push((zeta, 1));
    let dd = divdiff(f, &nodes)?.top();
    Ok((dd * DoubleDouble::new(n as f64 * 2f64.powi(-(n as i32)))).to_f64())
}

/// Maximum of `|p(t) - f(t)|` over `samples` equispaced points strictly inside
/// `(x_1, x_0)`, where `p` interpolates `f` at `x_1..x_n`. Evaluated in
/// double-double through the barycentric formula.
pub fn interp_error_measured(f: &TestFunction, grid: &ChebGrid, samples: usize) -> f64 {
    let all = grid.nodes();
    let x = &all[1..];
    let fx = f.samples_dd(x);
    let weights: Vec<DoubleDouble> = x
        .iter()
        .enumerate()
        .map(|(k, &xk)| {
            let mut p = DoubleDouble::ONE;
            for (j, &xj) in x.iter().enumerate() {
                if j != k {
                    p *= DoubleDouble::from_diff(xk, xj);
                }
            }
            // keep the product moderate; a common factor cancels
            p.ldexp(-(x.len() as i32)).recip()
        })
        .collect();
    let (a, b) = (all[1], all[0]);
    (1..=samples)
        .map(|i| a + (b - a) * i as f64 / (samples + 1) as f64)
        .filter(|t| *t > a && *t < b)
        .map(|t| {
            let mut num = DoubleDouble::ZERO;
            let mut den = DoubleDouble::ZERO;
            for ((&xk, &wk), &fk) in x.iter().zip(&weights).zip(&fx) {
                let c = wk / DoubleDouble::from_diff(t, xk);
                num += c * fk;
                den += c;
            }
            (num / den - f.value_dd(DoubleDouble::new(t)))
                .abs()
                .to_f64()
        })
        .fold(0.0, f64::max)
}
